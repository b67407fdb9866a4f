use std::fmt::Write as _;
use std::path::Path;

use oldroyd_core::constitutive::{
    verify_coercivity, verify_growth, verify_monotonicity, verify_potential, CoercivityReport,
    ConstitutiveError, FLaw, GrowthReport, MonotonicityReport, PotentialReport, SamplingSpec,
};

use crate::{exit, load_config, Outcome};

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub growth: GrowthReport,
    pub monotonicity: MonotonicityReport,
    pub coercivity: CoercivityReport,
    /// `None` when the law has no closed-form potential.
    pub potential: Option<PotentialReport>,
}

impl HypothesisReport {
    pub fn violations(&self) -> usize {
        self.growth.violations.len()
            + self.monotonicity.violations.len()
            + self.coercivity.violations.len()
            + self.potential.as_ref().map_or(0, |p| p.violations.len())
    }
}

pub fn verify_law(law: &FLaw, spec: &SamplingSpec) -> HypothesisReport {
    let potential = match verify_potential(law, spec) {
        Ok(p) => Some(p),
        Err(ConstitutiveError::UnsupportedPotential(_)) => None,
        Err(e) => unreachable!("potential check failed unexpectedly: {e}"),
    };
    HypothesisReport {
        growth: verify_growth(law, spec),
        monotonicity: verify_monotonicity(law, spec),
        coercivity: verify_coercivity(law, spec),
        potential,
    }
}

const SHOWN: usize = 5;

fn list(out: &mut String, name: &str, v: &[oldroyd_core::constitutive::Violation]) {
    let _ = writeln!(out, "{name}_violations = {}", v.len());
    for x in v.iter().take(SHOWN) {
        let _ = writeln!(out, "  sample {}: {}", x.sample, x.message);
    }
    if v.len() > SHOWN {
        let _ = writeln!(out, "  ... {} more", v.len() - SHOWN);
    }
}

/// `oldroyd verify-hypotheses`: sample the law and print fitted constants.
pub fn cmd_verify_hypotheses(config_path: &Path, samples: usize, radius: f64) -> Outcome {
    let config = match load_config(config_path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if samples == 0 || !(radius > 0.0 && radius.is_finite()) {
        return Outcome::usage("--samples must be > 0 and --radius a finite value > 0");
    }
    let law = config.model.law();
    let r = verify_law(law, &SamplingSpec::new(samples, radius));
    let mut out = String::new();
    let _ = writeln!(out, "law = {} p = {}", law.kind.name(), law.p_exp);
    let _ = writeln!(out, "samples = {samples} radius = {radius}");
    let _ = writeln!(out, "c = {:.6e}", r.growth.c_fit);
    let _ = writeln!(out, "c_tilde = {:.6e}", r.growth.c_tilde_fit);
    let _ = writeln!(out, "nu_fit = {:.6e}", r.monotonicity.nu_fit);
    let _ = writeln!(out, "nu_coercive = {:.6e}", r.coercivity.nu_fit);
    match &r.potential {
        Some(p) => {
            let _ = writeln!(out, "C1 = {:.6e}", p.c1_fit);
            let _ = writeln!(out, "C2 = {:.6e}", p.c2_fit);
            let _ = writeln!(out, "potential_gradient_error = {:.6e}", p.max_gradient_error);
        }
        None => {
            let _ = writeln!(out, "potential = skipped (no closed form for this law)");
        }
    }
    list(&mut out, "growth", &r.growth.violations);
    list(&mut out, "monotonicity", &r.monotonicity.violations);
    list(&mut out, "coercivity", &r.coercivity.violations);
    if let Some(p) = &r.potential {
        list(&mut out, "potential", &p.violations);
    }
    let total = r.violations();
    let _ = writeln!(out, "total_violations = {total}");
    Outcome::new(if total == 0 { exit::PASS } else { exit::VERDICT }, out)
}
