use crate::error::{Error, Result};

/// Numerical policy shared by every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for matrix equality and the algebraic predicates.
    pub eq_rtol: f64,
    /// Pivot threshold, relative to the largest entry, below which a matrix
    /// is treated as rank deficient.
    pub rank_tol: f64,
    /// Clustering tolerance for eigenvalue multiplicities.
    pub pair_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq_rtol: 1e-10,
            rank_tol: 1e-10,
            pair_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(eq_rtol: f64, rank_tol: f64, pair_tol: f64) -> Result<Self> {
        let t = Self {
            eq_rtol,
            rank_tol,
            pair_tol,
        };
        t.validate()?;
        Ok(t)
    }

    /// Checks that every field lies strictly inside (0, 1).
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eq_rtol", self.eq_rtol),
            ("rank_tol", self.rank_tol),
            ("pair_tol", self.pair_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_eq_rtol(self, eq_rtol: f64) -> Result<Self> {
        Self::new(eq_rtol, self.rank_tol, self.pair_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let t = Tolerances::default();
        assert!(t.validate().is_ok());
        assert_eq!((t.eq_rtol, t.rank_tol, t.pair_tol), (1e-10, 1e-10, 1e-8));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Tolerances::new(0.0, 1e-10, 1e-8).is_err());
        assert!(Tolerances::new(1e-10, 1.0, 1e-8).is_err());
        assert!(Tolerances::new(1e-10, 1e-10, f64::NAN).is_err());
    }
}
