use crate::error::{Error, Result};

/// The triple `(lambda, m, n)` selecting one metric of the family.
///
/// `lambda >= 1` indexes the collapse, `m >= 1` is the dimension of the
/// collapsing sphere factor, and `n >= 2` is one more than the dimension of
/// the surviving sphere factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpParams {
    pub lambda: f64,
    pub m: u32,
    pub n: u32,
}

impl WarpParams {
    pub fn new(lambda: f64, m: u32, n: u32) -> Result<Self> {
        if !lambda.is_finite() || lambda < 1.0 {
            return Err(Error::Domain(format!(
                "lambda must be finite and >= 1, got {lambda}"
            )));
        }
        if m < 1 {
            return Err(Error::Domain(format!("m must be >= 1, got {m}")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("n must be >= 2, got {n}")));
        }
        Ok(Self { lambda, m, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(WarpParams::new(0.5, 8, 2).is_err());
        assert!(WarpParams::new(f64::NAN, 8, 2).is_err());
        assert!(WarpParams::new(1.0, 0, 2).is_err());
        assert!(WarpParams::new(1.0, 8, 1).is_err());
        assert!(WarpParams::new(1.0, 8, 2).is_ok());
    }
}
