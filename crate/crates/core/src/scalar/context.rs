use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrecisionError {
    #[error("precision of {0} digits is below the floor of {floor}", floor = PrecisionContext::MIN_DIGITS)]
    TooFewDigits(u32),
}

/// Working precision in decimal digits plus internal guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 15;
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self, PrecisionError> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self, PrecisionError> {
        if digits < Self::MIN_DIGITS {
            return Err(PrecisionError::TooFewDigits(digits));
        }
        Ok(Self { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Mantissa bits for the working digits, rounded up to whole 64-bit words.
    pub fn bits(&self) -> usize {
        let raw = (self.working_digits() as f64 * std::f64::consts::LOG2_10).ceil() as usize;
        raw.div_ceil(64) * 64
    }

    /// Context whose working precision covers `bits` of mantissa.
    pub fn for_bits(bits: usize) -> Self {
        let working = (bits as f64 * std::f64::consts::LOG10_2).ceil() as u32;
        let digits = working.saturating_sub(Self::DEFAULT_GUARD).max(Self::MIN_DIGITS);
        Self { digits, guard: Self::DEFAULT_GUARD }
    }

    pub fn with_digits(&self, digits: u32) -> Result<Self, PrecisionError> {
        Self::with_guard(digits, self.guard)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: 30, guard: Self::DEFAULT_GUARD }
    }
}
