use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::density::DensityMatrix;
use super::dims::SubsystemDims;
use super::pure_state::PureState;
use crate::linalg::{self, c, CVector};
use crate::{Error, Result};

/// Largest register count accepted by `ghz(n)`.
pub const GHZ_MAX: usize = 6;

/// Named test states.
///
/// | Name | State |
/// |---|---|
/// | `bell` | `Φ₂` on `A ⊗ B` |
/// | `phi(K)` | `Φ_K` on `A ⊗ B` |
/// | `ghz(n)` | `(|0…0⟩ + |1…1⟩)/√2` on registers `A, B, R, X4, …` |
/// | `werner(p)` | `p |Ψ⁻⟩⟨Ψ⁻| + (1 − p) I/4` |
/// | `schmidt(p1,…,pk)` | `Σ √p_i |ii⟩` |
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Bell,
    Phi(usize),
    Ghz(usize),
    Werner(f64),
    Schmidt(Vec<f64>),
}

/// Either representation; pure presets stay pure.
#[derive(Debug, Clone)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(p) => p.density(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    pub fn dims(&self) -> &SubsystemDims {
        match self {
            QuantumState::Pure(p) => p.dims(),
            QuantumState::Mixed(m) => m.dims(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            QuantumState::Pure(p) => Some(p),
            QuantumState::Mixed(_) => None,
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        QuantumState::Mixed(m)
    }
}

fn register_label(i: usize) -> String {
    match i {
        0 => "A".into(),
        1 => "B".into(),
        2 => "R".into(),
        _ => format!("X{}", i + 1),
    }
}

impl Preset {
    pub fn build(&self) -> Result<QuantumState> {
        Ok(match self {
            Preset::Bell => PureState::maximally_entangled(2)?.into(),
            Preset::Phi(k) => PureState::maximally_entangled(*k)?.into(),
            Preset::Ghz(n) => {
                let dims = SubsystemDims::new((0..*n).map(|i| (register_label(i), 2)))?;
                let mut v = CVector::zeros(1 << n);
                v[0] = c(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                v[(1 << n) - 1] = c(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                PureState::new(v, dims)?.into()
            }
            Preset::Werner(p) => {
                let h = core::f64::consts::FRAC_1_SQRT_2;
                let mut singlet = CVector::zeros(4);
                singlet[1] = c(h, 0.0);
                singlet[2] = c(-h, 0.0);
                let m = linalg::outer(&singlet).scale(*p) + linalg::identity(4).scale((1.0 - p) / 4.0);
                DensityMatrix::new(m, SubsystemDims::ab(2, 2)?)?.into()
            }
            Preset::Schmidt(probs) => PureState::schmidt_form(probs)?.into(),
        })
    }
}

fn parse_args(name: &str, body: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidPreset(format!("{name}: `{}` is not a number", t.trim())))
        })
        .collect()
}

fn single_count(name: &str, args: &[f64], min: usize, max: usize) -> Result<usize> {
    match args {
        [x] if x.fract() == 0.0 && *x >= min as f64 && *x <= max as f64 => Ok(*x as usize),
        _ => Err(Error::InvalidPreset(format!("{name} takes one integer in [{min}, {max}]"))),
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "bell" {
            return Ok(Preset::Bell);
        }
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::InvalidPreset(format!("unknown preset `{s}`")))?;
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::InvalidPreset(format!("missing `)` in `{s}`")))?;
        let args = parse_args(name, body)?;
        match name.trim() {
            "phi" => Ok(Preset::Phi(single_count("phi", &args, 1, 64)?)),
            "ghz" => Ok(Preset::Ghz(single_count("ghz", &args, 2, GHZ_MAX)?)),
            "werner" => match args[..] {
                [p] if (0.0..=1.0).contains(&p) => Ok(Preset::Werner(p)),
                _ => Err(Error::InvalidPreset("werner takes one parameter in [0, 1]".into())),
            },
            "schmidt" => {
                if args.len() > 64 {
                    return Err(Error::InvalidPreset("schmidt takes at most 64 weights".into()));
                }
                Ok(Preset::Schmidt(args))
            }
            other => Err(Error::InvalidPreset(format!("unknown preset `{other}`"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Bell => f.write_str("bell"),
            Preset::Phi(k) => write!(f, "phi({k})"),
            Preset::Ghz(n) => write!(f, "ghz({n})"),
            Preset::Werner(p) => write!(f, "werner({p})"),
            Preset::Schmidt(ps) => {
                let parts: Vec<String> = ps.iter().map(ToString::to_string).collect();
                write!(f, "schmidt({})", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let bell = "bell".parse::<Preset>().unwrap().build().unwrap();
        let rho_a = bell.density().partial_trace(&["A"]).unwrap();
        assert!((rho_a.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);

        let ghz = "ghz(3)".parse::<Preset>().unwrap().build().unwrap();
        let labels: Vec<&str> = ghz.dims().labels().collect();
        assert_eq!(labels, ["A", "B", "R"]);

        let w = "werner(0.5)".parse::<Preset>().unwrap().build().unwrap().density();
        let ev = w.eigenvalues();
        assert!((ev[0] - 0.625).abs() < 1e-14 && (ev[3] - 0.125).abs() < 1e-14);

        let s = " schmidt(0.8, 0.2) ".parse::<Preset>().unwrap();
        assert_eq!(s, Preset::Schmidt(alloc::vec![0.8, 0.2]));
        assert_eq!(s.to_string(), "schmidt(0.8,0.2)");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["phi(0)", "phi(2.5)", "ghz(9)", "werner(2)", "nope", "schmidt(0.5", "phi(x)"] {
            assert!(bad.parse::<Preset>().is_err(), "{bad}");
        }
        assert!("schmidt(0.5,0.2)".parse::<Preset>().unwrap().build().is_err());
    }
}
