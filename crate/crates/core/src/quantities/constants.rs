use super::QuantityError;

/// Fine-structure constant and electron rest frequency for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsSet {
    alpha: f64,
    electron_rest_frequency: f64,
    label: String,
}

impl ConstantsSet {
    pub fn new(
        alpha: f64,
        electron_rest_frequency: f64,
        label: impl Into<String>,
    ) -> Result<Self, QuantityError> {
        if !(alpha > 0.0 && alpha < 0.01) {
            return Err(QuantityError::Constants(format!(
                "alpha must lie in (0, 0.01), got {alpha}"
            )));
        }
        if !(electron_rest_frequency.is_finite() && electron_rest_frequency > 0.0) {
            return Err(QuantityError::Constants(format!(
                "electron rest frequency must be positive, got {electron_rest_frequency}"
            )));
        }
        Ok(Self {
            alpha,
            electron_rest_frequency,
            label: label.into(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// m_e c² / h in Hz.
    pub fn electron_rest_frequency(&self) -> f64 {
        self.electron_rest_frequency
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Zα for a nuclear charge, rejecting Zα ≥ 1.
    pub fn z_alpha(&self, z: NuclearCharge) -> Result<f64, QuantityError> {
        let za = f64::from(z.get()) * self.alpha;
        if za >= 1.0 {
            return Err(QuantityError::ZAlphaDomain {
                z: z.get(),
                z_alpha: za,
            });
        }
        Ok(za)
    }
}

/// Nuclear charge number Z ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NuclearCharge(u32);

impl NuclearCharge {
    pub fn new(z: u32) -> Result<Self, QuantityError> {
        if z == 0 {
            return Err(QuantityError::ZeroCharge);
        }
        Ok(Self(z))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for NuclearCharge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
