//! Submeasures `φ_{F,τ}(A) = Φ_F(P_A τ)` and their tail behaviour on
//! generated sets.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;
use crate::finset::{block_of, FiniteSet};
use crate::norms::{ext_norm, FinVec};
use crate::rational::{self, Rational};
use crate::setgen::SetGenerator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSeq {
    /// `λ_k = 2^{-n}` on `P_n`.
    Lambda,
    /// `1/k`.
    Harmonic,
    One,
    /// `2^{-k}`.
    Geometric,
    /// `1/n²` on `P_n` for `n ≥ 1`, and 1 at `k = 1`.
    FarahBlock,
    Custom {
        #[serde(with = "rational::serde_str_vec")]
        table: Vec<Rational>,
        default: Box<WeightSeq>,
    },
}

impl WeightSeq {
    /// `τ_k` for `k ≥ 1`; the table of a custom sequence starts at `k = 1`.
    pub fn weight(&self, k: u64) -> Rational {
        debug_assert!(k >= 1);
        match self {
            WeightSeq::Lambda => rational::pow2_neg(block_of(k)),
            WeightSeq::Harmonic => Rational::new(BigInt::one(), BigInt::from(k)),
            WeightSeq::One => Rational::one(),
            WeightSeq::Geometric => Rational::new(BigInt::one(), BigInt::one() << k),
            WeightSeq::FarahBlock => {
                let n = block_of(k) as u64;
                if n == 0 {
                    Rational::one()
                } else {
                    Rational::new(BigInt::one(), BigInt::from(n * n))
                }
            }
            WeightSeq::Custom { table, default } => match table.get(k as usize - 1) {
                Some(q) => q.clone(),
                None => default.weight(k),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let WeightSeq::Custom { table, default } = self {
            if table.iter().any(|q| !q.is_positive()) {
                return Err(Error::InvalidArgument("weights must be positive".into()));
            }
            default.validate()?;
        }
        Ok(())
    }

    /// Whether `Σ_k τ_k = ∞`, decided from the closed form of the tail rule.
    pub fn diverges(&self) -> bool {
        match self {
            WeightSeq::Geometric => false,
            WeightSeq::Custom { default, .. } => default.diverges(),
            _ => true,
        }
    }

    pub fn mass(&self, set: &FiniteSet) -> Rational {
        set.iter().fold(Rational::zero(), |a, k| a + self.weight(k))
    }

    /// `τ·χ_A`.
    pub fn on(&self, set: &FiniteSet) -> FinVec {
        FinVec::weighted_indicator(set, |k| self.weight(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmeasureSpec {
    pub family: Family,
    pub tau: WeightSeq,
}

impl SubmeasureSpec {
    pub fn new(family: Family, tau: WeightSeq) -> Self {
        SubmeasureSpec { family, tau }
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.tau.validate()
    }
}

pub fn phi(s: &SubmeasureSpec, set: &FiniteSet) -> Rational {
    ext_norm(&s.family, &s.tau.on(set))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailRow {
    pub cutoff: u64,
    pub horizon: u64,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// Window values `φ(A ∩ [n, horizon))`. Each is a lower bound for `φ(A \ n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailProfile {
    pub bound: &'static str,
    pub rows: Vec<TailRow>,
}

impl TailProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cutoff,horizon,value_rational,value_decimal\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.cutoff,
                r.horizon,
                rational::format(&r.value),
                rational::to_decimal(&r.value, 12)
            );
        }
        out
    }
}

pub fn tail_profile(s: &SubmeasureSpec, g: &SetGenerator, cutoffs: &[u64], horizon: u64) -> Result<TailProfile> {
    if let Some(&c) = cutoffs.iter().find(|&&c| c > horizon) {
        return Err(Error::Precondition(format!("cutoff {c} exceeds horizon {horizon}")));
    }
    let a = g.realize(horizon);
    let rows = cutoffs.iter().map(|&n| TailRow { cutoff: n, horizon, value: phi(s, &a.window(n, horizon)) }).collect();
    Ok(TailProfile { bound: "lower", rows })
}

/// `Σ 2^{-|s|}` over the prefix-minimal nodes of `A`.
pub fn phi_trace(set: &FiniteSet) -> Rational {
    set.iter()
        .filter(|&c| {
            let mut p = c >> 1;
            while p >= 1 {
                if set.contains(p) {
                    return false;
                }
                p >>= 1;
            }
            true
        })
        .fold(Rational::zero(), |a, c| a + rational::pow2_neg(block_of(c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certified {
    pub cutoff: u64,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ExhVerdict {
    /// All window values from `from_cutoff` on are below `ε`.
    SupportsMembership {
        from_cutoff: u64,
    },
    /// The last window value is at least `ε`; `at` lists every cutoff whose
    /// value reaches `ε`.
    RefutesMembershipAt {
        at: Vec<Certified>,
        certified: String,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhEvidence {
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_str")]
    pub window_value: Rational,
    pub profile: TailProfile,
    #[serde(flatten)]
    pub verdict: ExhVerdict,
}

pub fn exh_evidence(
    s: &SubmeasureSpec,
    g: &SetGenerator,
    eps: &Rational,
    cutoffs: &[u64],
    horizon: u64,
) -> Result<ExhEvidence> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let mut cutoffs = cutoffs.to_vec();
    cutoffs.sort_unstable();
    cutoffs.dedup();
    let profile = tail_profile(s, g, &cutoffs, horizon)?;
    let verdict = match profile.rows.last() {
        None => ExhVerdict::Inconclusive,
        Some(last) if last.value >= *eps => {
            let at: Vec<Certified> = profile
                .rows
                .iter()
                .filter(|r| r.value >= *eps)
                .map(|r| Certified { cutoff: r.cutoff, value: r.value.clone() })
                .collect();
            let certified = format!(
                "phi(A \\ n) >= v at each listed cutoff n (lower semicontinuity); the tail is >= {} only if this persists beyond horizon {}",
                rational::format(eps),
                horizon
            );
            ExhVerdict::RefutesMembershipAt { at, certified }
        }
        Some(_) => {
            let pos = profile.rows.iter().rposition(|r| r.value >= *eps).map_or(0, |p| p + 1);
            ExhVerdict::SupportsMembership { from_cutoff: profile.rows[pos].cutoff }
        }
    };
    let window_value = phi(s, &g.realize(horizon));
    Ok(ExhEvidence { epsilon: eps.clone(), window_value, profile, verdict })
}
