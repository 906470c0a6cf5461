use std::fmt;

use super::QuantityError;

/// A real value with a one-standard-deviation uncertainty.
///
/// Uncertainties are treated as uncorrelated and combine in quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertainValue {
    value: f64,
    sigma: f64,
}

impl UncertainValue {
    pub fn new(value: f64, sigma: f64) -> Result<Self, QuantityError> {
        if !value.is_finite() {
            return Err(QuantityError::NonFinite {
                what: "value",
                got: value,
            });
        }
        if !sigma.is_finite() {
            return Err(QuantityError::NonFinite {
                what: "sigma",
                got: sigma,
            });
        }
        if sigma < 0.0 {
            return Err(QuantityError::NegativeSigma(sigma));
        }
        Ok(Self { value, sigma })
    }

    /// A value with zero uncertainty.
    ///
    /// Panics if `value` is not finite.
    pub fn exact(value: f64) -> Self {
        assert!(value.is_finite(), "exact value must be finite, got {value}");
        Self { value, sigma: 0.0 }
    }

    pub fn zero() -> Self {
        Self {
            value: 0.0,
            sigma: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_exact(&self) -> bool {
        self.sigma == 0.0
    }

    /// Multiplies by an exact constant: `value·c ± |c|·sigma`.
    pub fn scale(self, c: f64) -> Self {
        Self {
            value: self.value * c,
            sigma: self.sigma * c.abs(),
        }
    }

    /// Sum of two independent quantities.
    pub fn add_quadrature(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            sigma: self.sigma.hypot(other.sigma),
        }
    }

    /// Difference of two independent quantities.
    pub fn sub_quadrature(self, other: Self) -> Self {
        self.add_quadrature(other.scale(-1.0))
    }

    /// Shifts the value by an exact amount.
    pub fn offset(self, c: f64) -> Self {
        Self {
            value: self.value + c,
            sigma: self.sigma,
        }
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self, QuantityError> {
        Self::new(self.value, sigma)
    }
}

impl fmt::Display for UncertainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scale_examples() {
        let u = UncertainValue::new(2.0, 0.5).unwrap().scale(-3.0);
        assert_eq!(u, UncertainValue::new(-6.0, 1.5).unwrap());

        let u = UncertainValue::new(4.2, 0.3).unwrap().scale(0.0);
        assert_eq!(u.value(), 0.0);
        assert_eq!(u.sigma(), 0.0);

        let u = UncertainValue::new(1.0, 0.1).unwrap();
        assert_eq!(u.scale(1.0), u);
    }

    #[test]
    fn quadrature_examples() {
        let a = UncertainValue::new(1.0, 3.0).unwrap();
        let b = UncertainValue::new(2.0, 4.0).unwrap();
        assert_eq!(a.add_quadrature(b), UncertainValue::new(3.0, 5.0).unwrap());

        let s = UncertainValue::exact(1.5).add_quadrature(UncertainValue::exact(-0.25));
        assert_eq!(s, UncertainValue::exact(1.25));

        let e = UncertainValue::new(0.0, 0.7).unwrap();
        let sum = e.add_quadrature(e);
        assert!((sum.sigma() - 0.7 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            UncertainValue::new(1.0, -0.1),
            Err(QuantityError::NegativeSigma(_))
        ));
        assert!(UncertainValue::new(f64::NAN, 0.1).is_err());
        assert!(UncertainValue::new(1.0, f64::INFINITY).is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        -1e6f64..1e6
    }

    proptest! {
        #[test]
        fn nested_scale_matches_product(v in finite(), s in 0f64..1e3, a in -8i32..8, b in -8i32..8) {
            // powers of two keep both routes exact
            let (a, b) = (2f64.powi(a), 2f64.powi(b));
            let u = UncertainValue::new(v, s).unwrap();
            prop_assert_eq!(u.scale(a).scale(b), u.scale(a * b));
        }

        #[test]
        fn quadrature_commutes_with_identity(v1 in finite(), s1 in 0f64..1e3, v2 in finite(), s2 in 0f64..1e3) {
            let a = UncertainValue::new(v1, s1).unwrap();
            let b = UncertainValue::new(v2, s2).unwrap();
            prop_assert_eq!(a.add_quadrature(b), b.add_quadrature(a));
            prop_assert_eq!(a.add_quadrature(UncertainValue::zero()), a);
            prop_assert!(a.add_quadrature(b).sigma() >= 0.0);
            prop_assert!(a.scale(-v2).sigma() >= 0.0);
        }
    }
}
