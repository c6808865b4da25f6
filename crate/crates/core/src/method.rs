//! Solver tags shared by sweeps, reports and the command line.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::FlowParams;
use crate::oracle::{self, oracle_rayleigh};
use crate::secular::{self, first_approximation_ra, solve_secular};
use crate::variational::{self, variational_ra, VariationalBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// One-mode closed form; ignores N.
    FirstApprox,
    Secular { truncation: usize },
    Oracle { resolution: usize },
    Variational { size: usize },
}

impl Method {
    pub fn secular() -> Self {
        Method::Secular { truncation: secular::DEFAULT_TRUNCATION }
    }

    pub fn oracle() -> Self {
        Method::Oracle { resolution: oracle::DEFAULT_RESOLUTION }
    }

    pub fn variational() -> Self {
        Method::Variational { size: variational::DEFAULT_BASIS_SIZE }
    }

    /// Builds a method from a family name plus optional size overrides.
    /// `size` is K for the Galerkin families; `resolution` is the oracle grid.
    pub fn from_family(family: &str, size: Option<usize>, resolution: Option<usize>) -> Result<Self> {
        let m = match family {
            "first-approx" => Method::FirstApprox,
            "secular" => Method::Secular { truncation: size.unwrap_or(secular::DEFAULT_TRUNCATION) },
            "variational" => Method::Variational { size: size.unwrap_or(variational::DEFAULT_BASIS_SIZE) },
            "oracle" => Method::Oracle { resolution: resolution.unwrap_or(oracle::DEFAULT_RESOLUTION) },
            other => return Err(Error::UnknownMethod(other.to_string())),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Method::FirstApprox => Ok(()),
            Method::Secular { truncation } if truncation >= 1 => Ok(()),
            Method::Secular { .. } => Err(Error::domain("secular truncation K must be at least 1")),
            Method::Variational { size } if size >= 2 => Ok(()),
            Method::Variational { .. } => Err(Error::domain("variational basis size K must be at least 2")),
            Method::Oracle { resolution } if resolution >= oracle::MIN_RESOLUTION => Ok(()),
            Method::Oracle { .. } => Err(Error::domain(format!(
                "oracle resolution must be at least {}",
                oracle::MIN_RESOLUTION
            ))),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Method::FirstApprox => "first-approx",
            Method::Secular { .. } => "secular",
            Method::Oracle { .. } => "oracle",
            Method::Variational { .. } => "variational",
        }
    }

    /// Truncation, basis size or grid resolution, whichever applies.
    pub fn size_parameter(&self) -> Option<usize> {
        match *self {
            Method::FirstApprox => None,
            Method::Secular { truncation } => Some(truncation),
            Method::Oracle { resolution } => Some(resolution),
            Method::Variational { size } => Some(size),
        }
    }

    pub fn uses_heating_rate(&self) -> bool {
        !matches!(self, Method::FirstApprox)
    }

    /// Marginal Rayleigh number at `params`. An oracle solve whose two grid
    /// levels disagree is reported as an error rather than returned.
    pub fn rayleigh(&self, params: &FlowParams) -> Result<f64> {
        match *self {
            Method::FirstApprox => first_approximation_ra(params.a()),
            Method::Secular { truncation } => Ok(solve_secular(params, truncation)?.rayleigh),
            Method::Variational { size } => variational_ra(params, &VariationalBasis::new(size)?),
            Method::Oracle { resolution } => {
                let r = oracle_rayleigh(params, resolution)?;
                if !r.converged {
                    return Err(Error::numeric(format!(
                        "oracle not converged: Ra = {} at {} vs {} at {}",
                        r.rayleigh,
                        resolution,
                        r.refined_rayleigh,
                        2 * resolution
                    )));
                }
                Ok(r.rayleigh)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Method::FirstApprox => f.write_str("first-approx"),
            Method::Secular { truncation } => write!(f, "secular-K{truncation}"),
            Method::Oracle { resolution } => write!(f, "oracle-R{resolution}"),
            Method::Variational { size } => write!(f, "variational-K{size}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts a bare family (`secular`) or a full tag (`secular-K24`, `oracle-R64`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownMethod(s.to_string());
        if s == "first-approx" {
            return Ok(Method::FirstApprox);
        }
        let (family, suffix) = match s.rsplit_once('-') {
            Some((fam, suf)) if matches!(fam, "secular" | "oracle" | "variational") => (fam, Some(suf)),
            _ => (s, None),
        };
        let (size, resolution) = match (family, suffix) {
            (_, None) => (None, None),
            ("oracle", Some(suf)) => (None, Some(suf.strip_prefix('R').ok_or_else(bad)?.parse().map_err(|_| bad())?)),
            (_, Some(suf)) => (Some(suf.strip_prefix('K').ok_or_else(bad)?.parse().map_err(|_| bad())?), None),
        };
        Method::from_family(family, size, resolution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for m in [
            Method::FirstApprox,
            Method::Secular { truncation: 24 },
            Method::Oracle { resolution: 48 },
            Method::Variational { size: 3 },
        ] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!("secular".parse::<Method>().unwrap(), Method::secular());
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(matches!("galerkin".parse::<Method>(), Err(Error::UnknownMethod(_))));
        assert!("secular-X3".parse::<Method>().is_err());
        assert!("secular-K0".parse::<Method>().is_err());
        assert!("oracle-R8".parse::<Method>().is_err());
        assert!("variational-K1".parse::<Method>().is_err());
    }

    #[test]
    fn first_approximation_ignores_n() {
        let m = Method::FirstApprox;
        let r0 = m.rayleigh(&FlowParams::new(0.0, 9.711).unwrap()).unwrap();
        let r5 = m.rayleigh(&FlowParams::new(5.0, 9.711).unwrap()).unwrap();
        assert_eq!(r0, r5);
        assert!(!m.uses_heating_rate());
    }
}
