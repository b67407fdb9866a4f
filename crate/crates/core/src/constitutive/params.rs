use super::ConstitutiveError;

/// Which branch of the admissibility rule accepted the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityCase {
    /// `2ν(1−θ) > 1`: every `λ ∈ [0,1]` is allowed.
    StrongDissipation,
    /// `2ν(1−θ) ≤ 1`: requires `λ < √(2ν(1−θ))`.
    SmallCoupling,
}

impl AdmissibilityCase {
    pub fn describe(&self) -> &'static str {
        match self {
            AdmissibilityCase::StrongDissipation => {
                "strong dissipation: 2*nu*(1-theta) > 1, any lambda in [0,1]"
            }
            AdmissibilityCase::SmallCoupling => {
                "small coupling: 2*nu*(1-theta) <= 1 and lambda < sqrt(2*nu*(1-theta))"
            }
        }
    }
}

/// Weissenberg number, retardation ratio and the derived relaxation /
/// coupling coefficients `a = 1/We`, `b = 2(1−θ)/We`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    weissenberg: f64,
    theta: f64,
    a: f64,
    b: f64,
    nu_mono: f64,
    lambda: f64,
    gamma: f64,
    case: AdmissibilityCase,
}

fn out_of_range(name: &'static str, value: f64, rule: &str) -> ConstitutiveError {
    ConstitutiveError::OutOfRange {
        name,
        value,
        rule: rule.to_string(),
    }
}

impl PhysicalParams {
    /// Validates the inputs and the admissibility rule; the resulting
    /// `gamma` is always `< 1`.
    pub fn new(weissenberg: f64, theta: f64, nu_mono: f64, lambda: f64) -> Result<Self, ConstitutiveError> {
        if !(weissenberg > 0.0 && weissenberg.is_finite()) {
            return Err(out_of_range("weissenberg", weissenberg, "weissenberg must be > 0"));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(out_of_range("theta", theta, "theta must lie in (0,1)"));
        }
        if !(nu_mono > 0.0 && nu_mono.is_finite()) {
            return Err(out_of_range("nu", nu_mono, "nu must be > 0"));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(out_of_range("lambda", lambda, "lambda must lie in [0,1]"));
        }
        let threshold = 2.0 * nu_mono * (1.0 - theta);
        let case = if threshold > 1.0 {
            AdmissibilityCase::StrongDissipation
        } else if lambda < threshold.sqrt() {
            AdmissibilityCase::SmallCoupling
        } else {
            return Err(out_of_range(
                "lambda",
                lambda,
                &format!(
                    "lambda must satisfy lambda < sqrt(2*nu*(1-theta)) = {} when 2*nu*(1-theta) = {} <= 1",
                    threshold.sqrt(),
                    threshold
                ),
            ));
        };
        let a = 1.0 / weissenberg;
        let b = 2.0 * (1.0 - theta) / weissenberg;
        let gamma = lambda / (2.0 * (1.0 - theta)) * (b / (a * nu_mono)).sqrt();
        debug_assert!(gamma < 1.0);
        Ok(Self {
            weissenberg,
            theta,
            a,
            b,
            nu_mono,
            lambda,
            gamma,
            case,
        })
    }

    pub fn weissenberg(&self) -> f64 {
        self.weissenberg
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Relaxation rate `a = 1/We`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coupling coefficient `b = 2(1−θ)/We`.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nu_mono(&self) -> f64 {
        self.nu_mono
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `γ = λ/(2(1−θ)) √(b/(aν))`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The simplified form `γ = λ/√(2ν(1−θ))`.
    pub fn gamma_simplified(&self) -> f64 {
        self.lambda / (2.0 * self.nu_mono * (1.0 - self.theta)).sqrt()
    }

    pub fn admissibility(&self) -> AdmissibilityCase {
        self.case
    }
}
