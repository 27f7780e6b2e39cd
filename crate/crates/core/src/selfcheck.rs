//! Structural checks over every built complex: `∂∘∂ = 0`, Euler
//! characteristic per `(weight, t)`, the universal-coefficient bound, and
//! agreement with the dense oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::algebra::Surface;
use crate::ce::{self, CEComplex, Fault};
use crate::error::Result;
use crate::linear::{oracle, DimensionTable};
use crate::scalar::Field;

#[derive(Debug, Clone)]
pub struct SelfcheckConfig {
    pub surfaces: Vec<Surface>,
    pub max_weight: u32,
    pub primes: Vec<u64>,
    /// Compare against the dense oracle up to this weight; 0 disables it.
    pub oracle_max_weight: u32,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        Self {
            surfaces: vec![Surface::torus(), Surface::punctured(1), Surface::punctured(2)],
            max_weight: 7,
            primes: vec![3, 5, 7],
            oracle_max_weight: 4,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub surface: String,
    pub field: String,
    pub weight: u32,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{tag} {} {} k={} {}", self.surface, self.field, self.weight, self.check)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelfcheckReport {
    pub outcomes: Vec<Outcome>,
    pub elapsed: Duration,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

/// `Σ_s (−1)^s dim` for each `(weight, t)`.
fn euler_by_column(table: &DimensionTable) -> BTreeMap<(u32, i64), i64> {
    let mut out: BTreeMap<(u32, i64), i64> = BTreeMap::new();
    for ((w, s, t), d) in table.bidegrees() {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        *out.entry((w, t)).or_default() += sign * d as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn run_selfcheck(config: &SelfcheckConfig) -> Result<SelfcheckReport> {
    let start = Instant::now();
    let mut report = SelfcheckReport::default();
    let mut fields = vec![Field::rationals()];
    for &p in &config.primes {
        fields.push(Field::prime(p)?);
    }
    for surface in &config.surfaces {
        let mut rational: BTreeMap<u32, DimensionTable> = BTreeMap::new();
        for &field in &fields {
            let g = ce::surface_algebra(surface, config.max_weight, field)?;
            for k in 1..=config.max_weight {
                let cx = CEComplex::build_with(&g, k, config.fault)?;
                let mut push = |check, passed, detail: String| {
                    report.outcomes.push(Outcome {
                        surface: surface.to_string(),
                        field: field.to_string(),
                        weight: k,
                        check,
                        passed,
                        detail,
                    })
                };
                if let Err(e) = cx.chain().check_square_zero() {
                    push("d^2 = 0", false, e.to_string());
                    continue;
                }
                push("d^2 = 0", true, String::new());
                let h = cx.homology()?;

                let chain_euler = euler_by_column(&cx.chain().chain_dims());
                let homology_euler = euler_by_column(&h);
                push(
                    "euler characteristic",
                    chain_euler == homology_euler,
                    if chain_euler == homology_euler { String::new() } else { format!("{chain_euler:?} vs {homology_euler:?}") },
                );

                if k <= config.oracle_max_weight {
                    let dense = oracle::dense_homology(cx.chain());
                    push("dense oracle", dense == h, if dense == h { String::new() } else { "tables differ".into() });
                }

                match field.characteristic() {
                    0 => {
                        rational.insert(k, h);
                    }
                    _ => {
                        let q = &rational[&k];
                        let below: Vec<_> = q
                            .bidegrees()
                            .filter(|&((w, s, t), d)| h.bidegree(w, s, t) < d)
                            .map(|(key, _)| (key.1, key.2))
                            .collect();
                        push(
                            "dim F_p >= dim Q",
                            below.is_empty(),
                            if below.is_empty() { String::new() } else { format!("below at {below:?}") },
                        );
                    }
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_config_is_clean() {
        let cfg = SelfcheckConfig {
            surfaces: vec![Surface::torus(), Surface::punctured(1)],
            max_weight: 4,
            primes: vec![3, 5],
            ..Default::default()
        };
        let r = run_selfcheck(&cfg).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        // 2 surfaces × 3 fields × 4 weights, each with d², Euler and oracle
        assert!(r.outcomes.len() >= 2 * 3 * 4 * 3);
    }

    #[test]
    fn fault_is_caught() {
        let cfg = SelfcheckConfig {
            surfaces: vec![Surface::torus()],
            max_weight: 4,
            primes: vec![5],
            fault: Some(Fault::MixedTermSign),
            ..Default::default()
        };
        let r = run_selfcheck(&cfg).unwrap();
        assert!(!r.passed());
        assert!(r.failures().all(|o| o.check == "d^2 = 0" && o.weight == 4));
    }
}
