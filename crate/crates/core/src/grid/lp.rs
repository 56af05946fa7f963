//! Numerical check of the codegree hypotheses of the sparse-coloring theorem
//! for rank-4 hypergraphs, evaluated on a measured degree profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::DegreeProfile;

/// One inequality `value ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub value: u64,
    pub bound: f64,
    pub pass: bool,
    /// `value / bound`; at most 1 exactly when the condition passes.
    pub slack: f64,
}

impl Condition {
    fn new(value: u64, bound: f64) -> Self {
        let slack = if bound > 0.0 {
            value as f64 / bound
        } else if value == 0 {
            0.0
        } else {
            f64::INFINITY
        };
        Condition {
            value,
            bound,
            pass: (value as f64) <= bound,
            slack,
        }
    }

    /// CSV cell such as `pass:0.031250`.
    pub fn cell(&self) -> String {
        format!("{}:{:.6}", if self.pass { "pass" } else { "fail" }, self.slack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpConditionReport {
    pub n: i64,
    pub s_star: i64,
    pub f: f64,
    pub gamma: f64,
    pub cond_23: Condition,
    pub cond_34: Condition,
    pub cond_24: Condition,
    pub cond_k3: Condition,
}

impl LpConditionReport {
    pub const CSV_HEADER: [&'static str; 8] = ["n", "s_star", "f", "gamma", "cond_23", "cond_34", "cond_24", "cond_K3"];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.s_star.to_string(),
            format!("{:.6}", self.f),
            format!("{:.6}", self.gamma),
            self.cond_23.cell(),
            self.cond_34.cell(),
            self.cond_24.cell(),
            self.cond_k3.cell(),
        ]
    }

    pub fn all_pass(&self) -> bool {
        [self.cond_23, self.cond_34, self.cond_24, self.cond_k3].iter().all(|c| c.pass)
    }
}

/// `f = (ln n)^{1/2}`.
pub fn default_f(n: i64) -> f64 {
    (n as f64).ln().sqrt()
}

/// `γ = max_ℓ Δ_ℓ^{1/(ℓ−1)}`, then `Δ_{2,3}, Δ_{3,4} ≤ γ/f` and `Δ_{2,4}, Δ_{K₃} ≤ γ²/f`.
pub fn check_lp_conditions(profile: &DegreeProfile, f: f64) -> Result<LpConditionReport> {
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::Domain(format!("f = {f} must be a positive finite number")));
    }
    let gamma = (profile.delta_2 as f64)
        .max((profile.delta_3 as f64).sqrt())
        .max((profile.delta_4 as f64).cbrt());
    Ok(LpConditionReport {
        n: profile.n,
        s_star: profile.s_star,
        f,
        gamma,
        cond_23: Condition::new(profile.delta_23, gamma / f),
        cond_34: Condition::new(profile.delta_34, gamma / f),
        cond_24: Condition::new(profile.delta_24, gamma * gamma / f),
        cond_k3: Condition::new(profile.delta_k3, gamma * gamma / f),
    })
}
