use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::logic::GaifmanSentence;
use crate::solver::PipelineConfig;

/// Powers of two up to this exponent are expanded into exact integers.
const EXACT_EXPONENT_LIMIT: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Theoretical,
    Configured,
}

/// An integer that is either small enough to hold or kept as a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Exact(BigUint),
    Symbolic(String),
}

impl Quantity {
    pub fn as_usize(&self) -> Option<usize> {
        match self {
            Quantity::Exact(n) => usize::try_from(n).ok(),
            Quantity::Symbolic(_) => None,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(n) => write!(f, "{n}"),
            Quantity::Symbolic(s) => f.write_str(s),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// w = 2^(coeff · 2^inner) · factor, held without evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub coeff: u64,
    #[serde(serialize_with = "as_decimal")]
    pub inner: BigUint,
    pub factor: u64,
}

fn as_decimal<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

impl Tower {
    /// The exponent coeff · 2^inner when it is at most `limit`.
    pub fn exponent(&self, limit: u64) -> Option<u64> {
        let inner = u32::try_from(&self.inner).ok().filter(|&i| i < 64)?;
        self.coeff.checked_mul(1u64 << inner).filter(|&e| e <= limit)
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^({}·2^{})·{}", self.coeff, self.inner, self.factor)
    }
}

/// Constants of the area step for budget k and wall height q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AreaParameters {
    pub k: usize,
    pub q: usize,
    pub m: usize,
    pub r_area: usize,
    pub z: usize,
    pub ell_area: usize,
    pub b: usize,
    /// Treewidth bound of the third branch.
    pub f1: usize,
    /// Treewidth bound of the returned wall's compass.
    pub f2: usize,
}

impl AreaParameters {
    pub fn new(k: usize, q: usize, c1: usize, c2: usize) -> Self {
        let m = 3 * (2 * k + 1);
        let r_area = 2 * (2 * m + q) + 1;
        let z = c1 * r_area + 2;
        let ell_area = 4 * ceil_sqrt(&BigUint::from(k + 1)) - 1;
        // ⌈√(ℓ⁴·k)·z⌉ = ⌈√(ℓ⁴·k·z²)⌉
        let l = BigUint::from(ell_area);
        let radicand = l.pow(4) * BigUint::from(k) * BigUint::from(z).pow(2);
        let b = 2 * ell_area + ceil_sqrt(&radicand);
        AreaParameters {
            k,
            q,
            m,
            r_area,
            z,
            ell_area,
            b,
            f1: (c2 * b + k).max(c1 * q),
            f2: z - 2,
        }
    }
}

fn ceil_sqrt(n: &BigUint) -> usize {
    let s = n.sqrt();
    let s = if &s * &s == *n { s } else { s + 1u32 };
    usize::try_from(&s).expect("area parameters fit a machine word")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub mode: ParamMode,
    pub k: usize,
    /// Largest local radius.
    pub r: usize,
    /// Total number of witnesses over the basic sentences.
    pub ell: usize,
    pub d: usize,
    pub rho: usize,
    pub w: Quantity,
    pub q: Quantity,
    /// Present only in theoretical mode.
    pub tower: Option<Tower>,
    /// `None` when q is symbolic.
    pub area: Option<AreaParameters>,
}

impl Parameters {
    /// Admissible z. Configured runs with d > ρ clamp to [ρ, ρ].
    pub fn z_range(&self) -> std::ops::RangeInclusive<usize> {
        self.d.min(self.rho)..=self.rho
    }

    pub fn is_clamped(&self) -> bool {
        self.d > self.rho
    }

    /// Index of K^(z−d+1), floored at 1.
    pub fn modification_level(&self, z: usize) -> usize {
        (z + 1).saturating_sub(self.d).max(1)
    }

    /// Index of K^(t−r+1), floored at 1.
    pub fn witness_level(&self, t: usize) -> usize {
        (t + 1).saturating_sub(self.r).max(1)
    }
}

pub fn compute_parameters(k: usize, phi: &GaifmanSentence, mode: ParamMode, cfg: &PipelineConfig) -> Parameters {
    let r = phi.r();
    let ell = phi.ell();
    let d_formula = 2 * (r + (ell + 1) * r + r);
    match mode {
        ParamMode::Theoretical => {
            let d = d_formula;
            let rho = (2 * k + 1) * d;
            let tower = Tower {
                coeff: (rho * (k + 1)) as u64,
                inner: (BigUint::from(1u32) << ell) * BigUint::from(rho),
                factor: ((2 * k + 1) * (ell + 3)) as u64,
            };
            let (w, q) = match tower.exponent(EXACT_EXPONENT_LIMIT) {
                Some(e) => {
                    let w = (BigUint::from(1u32) << e) * BigUint::from(tower.factor);
                    // ⌈(2ρ+1)·√w⌉ = ⌈√((2ρ+1)²·w)⌉
                    let radicand = BigUint::from(2 * rho + 1).pow(2) * &w;
                    let s = radicand.sqrt();
                    let q = if &s * &s == radicand { s } else { s + 1u32 };
                    (Quantity::Exact(w), Quantity::Exact(q))
                }
                None => (
                    Quantity::Symbolic(tower.to_string()),
                    Quantity::Symbolic(format!("⌈{}·√({tower})⌉", 2 * rho + 1)),
                ),
            };
            let area = q.as_usize().map(|q| AreaParameters::new(k, q, cfg.c1, cfg.c2));
            Parameters { mode, k, r, ell, d, rho, w, q, tower: Some(tower), area }
        }
        ParamMode::Configured => {
            let rho = cfg.rho_hat.max(1);
            Parameters {
                mode,
                k,
                r,
                ell,
                d: cfg.d_hat.unwrap_or(d_formula).max(1),
                rho,
                w: Quantity::Exact(cfg.w_hat.into()),
                q: Quantity::Exact(cfg.q_hat.into()),
                tower: None,
                area: Some(AreaParameters::new(k, cfg.q_hat, cfg.c1, cfg.c2)),
            }
        }
    }
}
