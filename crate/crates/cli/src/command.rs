use clap::Subcommand;
use combinach::diagnostics::{
    c0_branch_check, exh_vs_fin_probe, l1_copy_check, mazur_combination_search, ptak_fill_search, schur_witness,
    variation_identity_check, BlockSequence, DyadicMeasure,
};
use combinach::families::{delta_system_extract, enumerate_members, precompact_status, spreading_check, symbolic_rank};
use combinach::norms::{ext_norm, tail_norm};
use combinach::rational::{self, Rational};
use combinach::schreier::{density_bound_check, schreier_contains, summable_like_witness, trace_vs_i2_witness};
use combinach::submeasures::{exh_evidence, phi, tail_profile, SubmeasureSpec, WeightSeq};
use combinach::{BitString, Error, Family, FinVec, FiniteSet, Ordinal, Result, SetGenerator};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::acceptance;
use crate::report::Report;

/// JSON, or a bare word: `lambda` for `"lambda"` and `singletons` for
/// `{"kind":"singletons"}`.
fn parse_json<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_str(s).or_else(|e| {
        let bare = s.trim();
        if bare.is_empty() || !bare.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(e.to_string());
        }
        serde_json::from_value(Value::String(bare.into()))
            .or_else(|_| serde_json::from_value(json!({ "kind": bare })))
            .map_err(|e| e.to_string())
    })
}

fn parse_bits(s: &str) -> std::result::Result<BitString, String> {
    BitString::parse(s).map_err(|e| e.to_string())
}

fn parse_ordinal(s: &str) -> std::result::Result<Ordinal, String> {
    Ordinal::parse(s).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// A JSON list given as a single flag value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for List<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::deserialize(d).map(List)
    }
}

/// Rows of rationals written as strings, `[["1","-1/2"],["3"]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rows(pub Vec<Vec<Rational>>);

impl<'de> Deserialize<'de> for Rows {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|row| row.iter().map(|q| rational::parse(q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map(Rows)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Subcommand, Debug, Clone, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", rename_all_fields = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// Extended norm of a finitely supported vector.
    Norm {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long = "vec", value_parser = parse_json::<FinVec>)]
        #[serde(rename = "vec")]
        vector: FinVec,
    },
    /// Norm of the tail projection onto `[n, ∞)`.
    Tail {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long = "vec", value_parser = parse_json::<FinVec>)]
        #[serde(rename = "vec")]
        vector: FinVec,
        #[arg(long)]
        n: u64,
    },
    /// Submeasure of a finite set.
    Phi {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        tau: WeightSeq,
        #[arg(long, value_parser = parse_json::<FiniteSet>)]
        set: FiniteSet,
    },
    /// Window values of a generated set at the given cutoffs.
    TailProfile {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        tau: WeightSeq,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long, value_delimiter = ',', required = true)]
        cutoffs: Vec<u64>,
        #[arg(long)]
        horizon: u64,
    },
    /// Tail profile plus a membership verdict for threshold `epsilon`.
    ExhEvidence {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        tau: WeightSeq,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long, value_parser = parse_rational)]
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        #[arg(long, value_delimiter = ',', required = true)]
        cutoffs: Vec<u64>,
        #[arg(long)]
        horizon: u64,
    },
    /// Membership of a set in `S_α`.
    SchreierCheck {
        #[arg(long, value_parser = parse_ordinal)]
        alpha: Ordinal,
        #[arg(long, value_parser = parse_json::<FiniteSet>)]
        set: FiniteSet,
    },
    /// Cantor–Bendixson rank, where known.
    Rank {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
    },
    /// Precompactness status, with a chain witness when not precompact.
    Precompact {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
    },
    /// Members inside `[1, n)`.
    Enumerate {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        #[serde(default)]
        max: Option<usize>,
    },
    /// The `k`-th term of the canonical fundamental sequence.
    Fundamental {
        #[arg(long, value_parser = parse_ordinal)]
        alpha: Ordinal,
        #[arg(long)]
        k: u64,
    },
    /// First spreading violation inside `[1, window)`.
    Spreading {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long)]
        window: u64,
    },
    /// Exact witness constructions.
    Witness {
        #[command(subcommand)]
        which: Witness,
    },
    /// Search for a delta-system of size `m`.
    DeltaSystem {
        #[arg(long, value_parser = parse_json::<List<FiniteSet>>)]
        sets: List<FiniteSet>,
        #[arg(long)]
        m: usize,
    },
    /// `ℓ1` equalities on a chain.
    L1Check {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_json::<List<FinVec>>)]
        samples: List<FinVec>,
    },
    /// `c0` equalities on a periodic branch.
    C0Check {
        #[arg(long, value_parser = parse_bits)]
        period: BitString,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_json::<Rows>)]
        samples: Rows,
    },
    /// Separating functional for a block sequence.
    Schur {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<BlockSequence>)]
        blocks: BlockSequence,
        #[arg(long, value_parser = parse_rational)]
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long)]
        horizon: u64,
    },
    /// Total variation against the antichain norm.
    Variation {
        #[arg(long, value_parser = parse_json::<DyadicMeasure>)]
        measure: DyadicMeasure,
    },
    /// Search for a set the family does not `ε`-fill.
    Ptak {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        weights: WeightSeq,
        #[arg(long, value_parser = parse_rational)]
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        #[arg(long)]
        horizon: u64,
    },
    /// Search for a convex combination of small norm.
    Mazur {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<BlockSequence>)]
        #[serde(default)]
        blocks: Option<BlockSequence>,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        weights: WeightSeq,
        #[arg(long, value_parser = parse_rational)]
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        #[arg(long)]
        horizon: u64,
    },
    /// Window norms and tails of `τ·χ_A`.
    ExhFin {
        #[arg(long, value_parser = parse_json::<Family>)]
        family: Family,
        #[arg(long, value_parser = parse_json::<WeightSeq>)]
        tau: WeightSeq,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long)]
        horizon: u64,
    },
    /// Run the acceptance suite.
    Selftest {},
}

#[derive(Subcommand, Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", rename_all_fields = "kebab-case", deny_unknown_fields)]
pub enum Witness {
    /// Sets with small `φ_α` whose union has `φ_α = 1`.
    SummableLike {
        #[arg(long, value_parser = parse_ordinal)]
        alpha: Ordinal,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        n: u32,
    },
    /// Trace tails against `S_2` windows.
    TraceI2 {
        #[arg(long, default_value_t = 3)]
        #[serde(default = "default_k_max")]
        k_max: u32,
    },
    /// `φ_1` bound for sets of small block density.
    DensityBound {
        #[arg(long)]
        j: u32,
        #[arg(long, value_parser = parse_json::<SetGenerator>)]
        generator: SetGenerator,
        #[arg(long)]
        start: u32,
        #[arg(long)]
        horizon: u64,
    },
}

fn default_k_max() -> u32 {
    3
}

fn q(v: &Rational) -> Value {
    Value::String(rational::format(v))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn check_horizon(h: u64) -> Result<()> {
    if h > 1 << 24 {
        return Err(Error::InvalidArgument("horizon above 2^24".into()));
    }
    Ok(())
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Witness { which } => format!("witness {}", which.name()),
            other => other.kind().to_string(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Tail { .. } => "tail",
            Command::Phi { .. } => "phi",
            Command::TailProfile { .. } => "tail-profile",
            Command::ExhEvidence { .. } => "exh-evidence",
            Command::SchreierCheck { .. } => "schreier-check",
            Command::Rank { .. } => "rank",
            Command::Precompact { .. } => "precompact",
            Command::Enumerate { .. } => "enumerate",
            Command::Fundamental { .. } => "fundamental",
            Command::Spreading { .. } => "spreading",
            Command::Witness { .. } => "witness",
            Command::DeltaSystem { .. } => "delta-system",
            Command::L1Check { .. } => "l1-check",
            Command::C0Check { .. } => "c0-check",
            Command::Schur { .. } => "schur",
            Command::Variation { .. } => "variation",
            Command::Ptak { .. } => "ptak",
            Command::Mazur { .. } => "mazur",
            Command::ExhFin { .. } => "exh-fin",
            Command::Selftest {} => "selftest",
        }
    }

    /// Checks every input before any computation starts.
    pub fn validate(&self) -> Result<()> {
        match self {
            Command::Norm { family, .. }
            | Command::Tail { family, .. }
            | Command::Rank { family }
            | Command::Precompact { family }
            | Command::Enumerate { family, .. }
            | Command::Spreading { family, .. }
            | Command::Schur { family, .. } => family.validate(),
            Command::Phi { family, tau, .. } => SubmeasureSpec::new(family.clone(), tau.clone()).validate(),
            Command::TailProfile { family, tau, generator, horizon, .. }
            | Command::ExhEvidence { family, tau, generator, horizon, .. }
            | Command::ExhFin { family, tau, generator, horizon } => {
                SubmeasureSpec::new(family.clone(), tau.clone()).validate()?;
                generator.validate()?;
                check_horizon(*horizon)
            }
            Command::L1Check { family, generator, n, .. } => {
                family.validate()?;
                generator.validate()?;
                check_horizon(*n)
            }
            Command::Ptak { family, weights, .. } | Command::Mazur { family, weights, .. } => {
                family.validate()?;
                weights.validate()
            }
            Command::Variation { measure } => measure.validate(),
            Command::Witness { which: Witness::DensityBound { generator, horizon, .. } } => {
                generator.validate()?;
                check_horizon(*horizon)
            }
            _ => Ok(()),
        }
    }

    pub fn execute(&self) -> Result<Report> {
        let report = match self {
            Command::Norm { family, vector } => Report::scalar(q(&ext_norm(family, vector))),
            Command::Tail { family, vector, n } => Report::scalar(q(&tail_norm(family, vector, *n))),
            Command::Phi { family, tau, set } => {
                Report::scalar(q(&phi(&SubmeasureSpec::new(family.clone(), tau.clone()), set)))
            }
            Command::TailProfile { family, tau, generator, cutoffs, horizon } => {
                let spec = SubmeasureSpec::new(family.clone(), tau.clone());
                let p = tail_profile(&spec, generator, cutoffs, *horizon)?;
                Report::table(to_value(&p), p.to_csv())
            }
            Command::ExhEvidence { family, tau, generator, epsilon, cutoffs, horizon } => {
                let spec = SubmeasureSpec::new(family.clone(), tau.clone());
                let e = exh_evidence(&spec, generator, epsilon, cutoffs, *horizon)?;
                Report::table(to_value(&e), e.profile.to_csv())
            }
            Command::SchreierCheck { alpha, set } => Report::scalar(Value::Bool(schreier_contains(alpha, set)?)),
            Command::Rank { family } => Report::scalar(match symbolic_rank(family) {
                Some(r) => Value::String(r.to_string()),
                None => Value::String("unknown".into()),
            }),
            Command::Precompact { family } => Report::record(to_value(&precompact_status(family))),
            Command::Enumerate { family, n, max } => {
                if *n > 64 {
                    return Err(Error::InvalidArgument("enumeration window above 64".into()));
                }
                Report::record(to_value(&enumerate_members(family, *n, *max)))
            }
            Command::Fundamental { alpha, k } => Report::scalar(Value::String(alpha.fundamental(*k)?.to_string())),
            Command::Spreading { family, window } => Report::record(match spreading_check(family, *window)? {
                None => json!({ "spreading": true }),
                Some((f, g)) => json!({ "spreading": false, "member": f, "raised": g }),
            }),
            Command::Witness { which } => which.execute()?,
            Command::DeltaSystem { sets, m } => Report::record(match delta_system_extract(&sets.0, *m)? {
                Some(d) => json!({ "found": true, "system": d }),
                None => json!({ "found": false }),
            }),
            Command::L1Check { family, generator, n, samples } => {
                Report::record(to_value(&l1_copy_check(family, generator, *n, &samples.0)?))
            }
            Command::C0Check { period, n, samples } => {
                Report::record(to_value(&c0_branch_check(period, *n, &samples.0)?))
            }
            Command::Schur { family, blocks, epsilon, generator, horizon } => {
                check_horizon(*horizon)?;
                Report::record(match schur_witness(family, blocks, epsilon, generator, *horizon)? {
                    Some(c) => json!({ "found": true, "certificate": c }),
                    None => json!({ "found": false }),
                })
            }
            Command::Variation { measure } => Report::record(to_value(&variation_identity_check(measure)?)),
            Command::Ptak { family, weights, epsilon, horizon } => {
                Report::record(to_value(&ptak_fill_search(family, weights, epsilon, *horizon)?))
            }
            Command::Mazur { family, blocks, weights, epsilon, horizon } => Report::record(to_value(
                &mazur_combination_search(family, blocks.as_ref(), weights, epsilon, *horizon)?,
            )),
            Command::ExhFin { family, tau, generator, horizon } => {
                Report::record(to_value(&exh_vs_fin_probe(family, tau, generator, *horizon)?))
            }
            Command::Selftest {} => {
                let results = acceptance::run_all();
                let failed = results.iter().any(|(_, r)| !r.passed);
                let lines: Vec<String> = results.iter().map(|(c, r)| acceptance::line(c, r)).collect();
                let value = Value::Array(
                    results
                        .iter()
                        .map(|(c, r)| json!({ "id": c.id, "title": c.title, "passed": r.passed, "detail": r.detail }))
                        .collect(),
                );
                Report::lines(value, lines, failed)
            }
        };
        Ok(report)
    }
}

impl Witness {
    fn name(&self) -> &'static str {
        match self {
            Witness::SummableLike { .. } => "summable-like",
            Witness::TraceI2 { .. } => "trace-i2",
            Witness::DensityBound { .. } => "density-bound",
        }
    }

    fn execute(&self) -> Result<Report> {
        Ok(Report::record(match self {
            Witness::SummableLike { alpha, n } => to_value(&summable_like_witness(alpha, *n)?),
            Witness::TraceI2 { k_max } => to_value(&trace_vs_i2_witness(*k_max)?),
            Witness::DensityBound { j, generator, start, horizon } => {
                to_value(&density_bound_check(*j, generator, *start, *horizon)?)
            }
        }))
    }
}
