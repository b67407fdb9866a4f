use crate::tensor::Mat2;

use super::{ConstitutiveError, PhysicalParams};

/// Shear-dependent viscosity `μ(d²) = 1 − λ + λ (1 + d²)^{(r−2)/2}`.
pub fn mu(d2: f64, lambda: f64, r_exp: f64) -> Result<f64, ConstitutiveError> {
    if d2 < 0.0 || d2.is_nan() {
        return Err(ConstitutiveError::NegativeArgument(d2));
    }
    Ok(1.0 - lambda + lambda * (1.0 + d2).powf(0.5 * (r_exp - 2.0)))
}

/// Piecewise-linear magnitude profile `φ(s)` for a radial law
/// `f(A) = φ(|A|) A/|A|`. Extrapolated linearly past the last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    knots: Vec<(f64, f64)>,
}

impl Table {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, ConstitutiveError> {
        if knots.len() < 2 {
            return Err(ConstitutiveError::InvalidTable("need at least two knots".into()));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(ConstitutiveError::InvalidTable(
                "first knot must be (0, 0) so that f(0) = 0".into(),
            ));
        }
        if knots.iter().any(|(s, v)| !s.is_finite() || !v.is_finite()) {
            return Err(ConstitutiveError::InvalidTable("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(ConstitutiveError::InvalidTable(
                "knot magnitudes must be strictly increasing".into(),
            ));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, s: f64) -> f64 {
        let k = &self.knots;
        let seg = match k.iter().position(|(x, _)| *x > s) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => k.len() - 2,
        };
        let ((x0, y0), (x1, y1)) = (k[seg], k[seg + 1]);
        y0 + (y1 - y0) * (s - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FKind {
    /// `f(A) = (1 + |A|)^{p−2} A`
    PowerAdditive,
    /// `f(A) = (1 + |A|²)^{(p−2)/2} A`
    PowerQuadratic,
    /// `f(A) = 2ν₀ A`
    Linear { nu0: f64 },
    /// User-supplied radial profile.
    Tabulated(Table),
}

impl FKind {
    pub fn name(&self) -> &'static str {
        match self {
            FKind::PowerAdditive => "power_additive",
            FKind::PowerQuadratic => "power_quadratic",
            FKind::Linear { .. } => "linear",
            FKind::Tabulated(_) => "tabulated",
        }
    }
}

/// The momentum-equation law `f` with its growth exponent `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FLaw {
    pub kind: FKind,
    pub p_exp: f64,
}

impl FLaw {
    pub fn new(kind: FKind, p_exp: f64) -> Self {
        Self { kind, p_exp }
    }

    /// Scalar profile `φ(s)` with `f(A) = φ(|A|) A/|A|`.
    pub fn magnitude(&self, s: f64) -> f64 {
        let p = self.p_exp;
        match &self.kind {
            FKind::PowerAdditive => (1.0 + s).powf(p - 2.0) * s,
            FKind::PowerQuadratic => (1.0 + s * s).powf(0.5 * (p - 2.0)) * s,
            FKind::Linear { nu0 } => 2.0 * nu0 * s,
            FKind::Tabulated(t) => t.eval(s),
        }
    }

    pub fn apply(&self, a: &Mat2) -> Mat2 {
        let p = self.p_exp;
        match &self.kind {
            FKind::PowerAdditive => a.scale((1.0 + a.norm()).powf(p - 2.0)),
            FKind::PowerQuadratic => a.scale((1.0 + a.norm2()).powf(0.5 * (p - 2.0))),
            FKind::Linear { nu0 } => a.scale(2.0 * nu0),
            FKind::Tabulated(t) => {
                let s = a.norm();
                if s == 0.0 {
                    Mat2::ZERO
                } else {
                    a.scale(t.eval(s) / s)
                }
            }
        }
    }

    /// Closed-form potential `U(η) = Φ(|η|)` with `∂U/∂η = f(η)`.
    pub fn potential(&self, eta: &Mat2) -> Result<f64, ConstitutiveError> {
        let p = self.p_exp;
        let s = eta.norm();
        match &self.kind {
            FKind::PowerQuadratic => Ok(((1.0 + s * s).powf(0.5 * p) - 1.0) / p),
            FKind::PowerAdditive => {
                if p == 2.0 {
                    return Ok(0.5 * s * s);
                }
                let q = 1.0 + s;
                Ok(q.powf(p) / p - q.powf(p - 1.0) / (p - 1.0) - 1.0 / p + 1.0 / (p - 1.0))
            }
            FKind::Linear { nu0 } => Ok(nu0 * s * s),
            FKind::Tabulated(_) => Err(ConstitutiveError::UnsupportedPotential("tabulated")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemVariant {
    /// Stress transport with the co-rotational terms `τ·w − w·τ`.
    S,
    /// No rotation terms, full `g`.
    S1,
    /// No rotation terms, `g(D) = b D`.
    S2,
}

impl SystemVariant {
    pub fn has_rotation(&self) -> bool {
        matches!(self, SystemVariant::S)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemVariant::S => "S",
            SystemVariant::S1 => "S1",
            SystemVariant::S2 => "S2",
        }
    }
}

/// The pair `(f, g)` together with the viscosity parameters `λ`, `r` and
/// the system variant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstitutiveModel {
    law: FLaw,
    lambda: f64,
    r_exp: f64,
    variant: SystemVariant,
}

impl ConstitutiveModel {
    pub fn new(
        law: FLaw,
        lambda: f64,
        r_exp: f64,
        variant: SystemVariant,
    ) -> Result<Self, ConstitutiveError> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(ConstitutiveError::OutOfRange {
                name: "lambda",
                value: lambda,
                rule: "lambda must lie in [0,1]".into(),
            });
        }
        if !(1.0..=2.0).contains(&r_exp) {
            return Err(ConstitutiveError::OutOfRange {
                name: "r",
                value: r_exp,
                rule: "r must lie in [1,2]".into(),
            });
        }
        let p = law.p_exp;
        match &law.kind {
            FKind::PowerAdditive | FKind::PowerQuadratic if !(p > 2.0 && p.is_finite()) => {
                return Err(ConstitutiveError::OutOfRange {
                    name: "p",
                    value: p,
                    rule: "power laws require p in (2, inf) in two dimensions".into(),
                });
            }
            FKind::Linear { nu0 } if !(*nu0 > 0.0 && nu0.is_finite()) => {
                return Err(ConstitutiveError::OutOfRange {
                    name: "nu0",
                    value: *nu0,
                    rule: "linear law requires nu0 > 0".into(),
                });
            }
            FKind::Linear { .. } | FKind::Tabulated(_) if !(p >= 2.0 && p.is_finite()) => {
                return Err(ConstitutiveError::OutOfRange {
                    name: "p",
                    value: p,
                    rule: "p must be >= 2".into(),
                });
            }
            _ => {}
        }
        Ok(Self {
            law,
            lambda,
            r_exp,
            variant,
        })
    }

    pub fn law(&self) -> &FLaw {
        &self.law
    }

    pub fn p_exp(&self) -> f64 {
        self.law.p_exp
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn r_exp(&self) -> f64 {
        self.r_exp
    }

    pub fn variant(&self) -> SystemVariant {
        self.variant
    }

    pub fn f_of_d(&self, d: &Mat2) -> Mat2 {
        self.law.apply(d)
    }

    /// `μ̃(|D|²) = b/(1−θ) (μ(|D|²) − θ)`, or the constant `b` for `S2`.
    pub fn mu_tilde(&self, d2: f64, params: &PhysicalParams) -> f64 {
        match self.variant {
            SystemVariant::S2 => params.b(),
            _ => {
                let m = 1.0 - self.lambda + self.lambda * (1.0 + d2).powf(0.5 * (self.r_exp - 2.0));
                params.b() / (1.0 - params.theta()) * (m - params.theta())
            }
        }
    }

    /// Stress source `g(D) = μ̃(|D|²) D`.
    pub fn g_of_d(&self, d: &Mat2, params: &PhysicalParams) -> Mat2 {
        d.scale(self.mu_tilde(d.norm2(), params))
    }

    /// `sup |μ̃|` over all strain rates.
    pub fn mu_tilde_bound(&self, params: &PhysicalParams) -> f64 {
        let b = params.b();
        let theta = params.theta();
        if self.variant == SystemVariant::S2 || self.lambda == 0.0 || self.r_exp == 2.0 {
            return b;
        }
        // μ ranges over (1 − λ, 1]
        b / (1.0 - theta) * (1.0 - theta).max((1.0 - self.lambda - theta).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(we: f64, theta: f64) -> PhysicalParams {
        PhysicalParams::new(we, theta, 1.0, 0.0).unwrap()
    }

    #[test]
    fn mu_hand_values() {
        assert_eq!(mu(7.0, 0.3, 2.0).unwrap(), 1.0);
        assert_eq!(mu(7.0, 0.0, 1.3).unwrap(), 1.0);
        assert_eq!(mu(3.0, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(mu(0.0, 0.8, 1.0).unwrap(), 1.0);
        assert!(mu(-1e-3, 0.5, 1.0).is_err());
    }

    #[test]
    fn f_hand_values() {
        let a = Mat2::IDENTITY;
        let add = FLaw::new(FKind::PowerAdditive, 3.0).apply(&a);
        let expect = 1.0 + 2f64.sqrt();
        assert!((add.0[0] - expect).abs() < 1e-15 && add.0[1] == 0.0);
        let a = Mat2::new(0.3, -1.2, -1.2, 2.0);
        assert_eq!(FLaw::new(FKind::PowerQuadratic, 2.0).apply(&a), a);
        for kind in [FKind::PowerAdditive, FKind::PowerQuadratic, FKind::Linear { nu0: 0.7 }] {
            assert_eq!(FLaw::new(kind, 3.0).apply(&Mat2::ZERO), Mat2::ZERO);
        }
    }

    #[test]
    fn g_cases() {
        let p = params(2.0, 0.5);
        assert_eq!(p.b(), 0.5);
        let d = Mat2::symmetric(1.0, 1.0, 0.0); // |D|² = 3
        let m = ConstitutiveModel::new(
            FLaw::new(FKind::PowerAdditive, 3.0),
            1.0,
            1.0,
            SystemVariant::S1,
        )
        .unwrap();
        assert_eq!(m.g_of_d(&d, &p), Mat2::ZERO);
        assert_eq!(m.g_of_d(&Mat2::ZERO, &p), Mat2::ZERO);

        let newtonian = ConstitutiveModel::new(
            FLaw::new(FKind::PowerAdditive, 3.0),
            0.6,
            2.0,
            SystemVariant::S,
        )
        .unwrap();
        let d = Mat2::symmetric(0.3, -0.7, 1.9);
        let g = newtonian.g_of_d(&d, &p);
        let bd = d.scale(p.b());
        for i in 0..4 {
            assert!((g.0[i] - bd.0[i]).abs() <= 1e-15 * bd.0[i].abs());
        }
    }

    #[test]
    fn model_validation() {
        let law = FLaw::new(FKind::PowerQuadratic, 3.0);
        assert!(ConstitutiveModel::new(law.clone(), 1.2, 1.5, SystemVariant::S).is_err());
        let err = ConstitutiveModel::new(law.clone(), 0.5, 2.5, SystemVariant::S).unwrap_err();
        assert!(err.to_string().contains("r must lie in [1,2]"));
        assert!(
            ConstitutiveModel::new(FLaw::new(FKind::PowerQuadratic, 2.0), 0.5, 1.5, SystemVariant::S)
                .is_err()
        );
        assert!(ConstitutiveModel::new(
            FLaw::new(FKind::Linear { nu0: 0.5 }, 2.0),
            0.5,
            1.5,
            SystemVariant::S2
        )
        .is_ok());
    }

    #[test]
    fn table_interpolation() {
        let t = Table::new(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).unwrap();
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(1.5), 1.5);
        assert_eq!(t.eval(3.0), 0.0);
        assert!(Table::new(vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(Table::new(vec![(0.0, 0.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    proptest! {
        #[test]
        fn mu_is_monotone_and_bounded(
            lambda in 0.0..=1.0f64, r in 1.0..2.0f64, x in 0.0..50.0f64, dx in 0.0..50.0f64,
        ) {
            let m0 = mu(x, lambda, r).unwrap();
            let m1 = mu(x + dx, lambda, r).unwrap();
            prop_assert!(m1 <= m0);
            prop_assert!(m1 >= 1.0 - lambda && m0 <= 1.0);
        }

        #[test]
        fn power_laws_are_odd(
            a11 in -20.0..20.0f64, a12 in -20.0..20.0f64, a22 in -20.0..20.0f64, p in 2.0..6.0f64,
        ) {
            let a = Mat2::symmetric(a11, a12, a22);
            for kind in [FKind::PowerAdditive, FKind::PowerQuadratic] {
                let law = FLaw::new(kind, p);
                prop_assert_eq!(law.apply(&-a), -law.apply(&a));
            }
        }

        #[test]
        fn mu_tilde_bound_dominates(
            lambda in 0.0..=1.0f64, r in 1.0..=2.0f64, theta in 0.01..0.99f64, d2 in 0.0..1e4f64,
        ) {
            let p = PhysicalParams::new(1.5, theta, 100.0, lambda).unwrap();
            let m = ConstitutiveModel::new(FLaw::new(FKind::PowerAdditive, 3.0), lambda, r, SystemVariant::S1).unwrap();
            prop_assert!(m.mu_tilde(d2, &p).abs() <= m.mu_tilde_bound(&p) * (1.0 + 1e-14));
        }
    }
}
