use fracgm::quadrature::QuadratureConfig;
use fracgm::{
    figm_mean, fibm_cov, fiou_cov, fisou_cov_with, iou_cov, isou_cov, kernel, ou_spec, sou_spec, FisouCrossTerm,
    FracOrder64, OuParams64, SouParams64,
};

use crate::args::{CrossTerm, ProcessArgs, ProcessName};
use crate::config::{pick, FileConfig};
use crate::output::{num, Meta};

/// A process with its resolved parameters.
#[derive(Debug, Clone, Copy)]
pub struct ProcessSpec {
    pub name: ProcessName,
    pub ou: OuParams64,
    pub sou: SouParams64,
    pub cross: FisouCrossTerm,
}

impl ProcessSpec {
    pub fn resolve(a: &ProcessArgs, f: &FileConfig) -> fracgm::Result<Self> {
        let mu = pick(a.mu, f.mu, 1.0);
        let sigma = pick(a.sigma, f.sigma, 1.0);
        let cross = match pick(a.fisou_cross, f.fisou_cross, CrossTerm::Zero) {
            CrossTerm::Zero => FisouCrossTerm::Zero,
            CrossTerm::Clamped => FisouCrossTerm::Clamped,
        };
        Ok(ProcessSpec {
            name: pick(a.process, f.process, ProcessName::Fibm),
            ou: OuParams64::new(mu, sigma, pick(a.beta, f.beta, 0.0), pick(a.y, f.y, 0.0))?,
            sou: SouParams64::new(mu, sigma)?,
            cross,
        })
    }

    /// Covariance at `(u, t)`; `alpha` is ignored by the non-fractional processes.
    pub fn cov(&self, u: f64, t: f64, alpha: Option<FracOrder64>, cfg: &QuadratureConfig) -> fracgm::Result<f64> {
        let a = || alpha.unwrap_or_else(FracOrder64::one);
        match self.name {
            ProcessName::Fibm => fibm_cov(u, t, a(), cfg),
            ProcessName::Fiou => fiou_cov(self.ou, u, t, a(), cfg),
            ProcessName::Fisou => fisou_cov_with(self.sou, u, t, a(), cfg, self.cross),
            ProcessName::Iou => iou_cov(self.ou, u, t),
            ProcessName::Isou => isou_cov(self.sou, u, t),
            ProcessName::Ou => kernel(&ou_spec(self.ou)?, u, t),
            ProcessName::Sou => kernel(&sou_spec(self.sou)?, u, t),
        }
    }

    /// Variance at `t`, by the closed form where one exists.
    pub fn var(&self, t: f64, alpha: Option<FracOrder64>, cfg: &QuadratureConfig) -> fracgm::Result<f64> {
        match (self.name, alpha) {
            (ProcessName::Fibm, Some(a)) => fracgm::fibm_var(t, a),
            _ => self.cov(t, t, alpha, cfg),
        }
    }

    /// Mean of the fractional process at `t` (nonzero only for FIOU).
    pub fn frac_mean(&self, t: f64, alpha: FracOrder64, cfg: &QuadratureConfig) -> fracgm::Result<f64> {
        match self.name {
            ProcessName::Fiou => figm_mean(&ou_spec(self.ou)?, t, alpha, cfg),
            _ => Ok(0.0),
        }
    }

    /// Whether values at `alpha` come from the singular quadrature.
    pub fn uses_quadrature(&self, diagonal_only: bool) -> bool {
        match self.name {
            ProcessName::Fibm => !diagonal_only,
            ProcessName::Fiou | ProcessName::Fisou => true,
            _ => false,
        }
    }

    pub fn meta(&self) -> Meta {
        let mut m = vec![("process".to_string(), self.name.as_str().to_string())];
        match self.name {
            ProcessName::Fibm => {}
            ProcessName::Fiou | ProcessName::Iou | ProcessName::Ou => {
                m.push(("mu".into(), num(self.ou.mu)));
                m.push(("sigma".into(), num(self.ou.sigma)));
                m.push(("beta".into(), num(self.ou.beta)));
                m.push(("y".into(), num(self.ou.y)));
            }
            ProcessName::Fisou | ProcessName::Isou | ProcessName::Sou => {
                m.push(("mu".into(), num(self.sou.mu)));
                m.push(("sigma".into(), num(self.sou.sigma)));
            }
        }
        if self.name == ProcessName::Fisou {
            let c = match self.cross {
                FisouCrossTerm::Zero => "zero",
                FisouCrossTerm::Clamped => "clamped",
            };
            m.push(("fisou_cross".into(), c.into()));
        }
        m
    }
}
