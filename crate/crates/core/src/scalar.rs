//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::Debug;

use nalgebra::{Complex, DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point type the matrix routines are generic over.
///
/// The associated tolerances are the thresholds used for numerical rank
/// decisions. They are tuned per precision: `f64` follows the defaults of the
/// toolkit (`1e-9` for ranks, `1e-12` for hermiticity), `f32` uses looser
/// values appropriate for its unit roundoff.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Default + Debug + Send + Sync + 'static
{
    /// Relative singular-value threshold for rank and null-space decisions.
    const RANK_TOL: f64;
    /// Relative deviation from hermiticity accepted (and symmetrized away) on input.
    const HERM_TOL: f64;
    /// Relative tolerance for recognising a scaled unitary intertwiner.
    const UNITARY_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }
}

impl Real for f64 {
    const RANK_TOL: f64 = 1e-9;
    const HERM_TOL: f64 = 1e-12;
    const UNITARY_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const RANK_TOL: f64 = 1e-4;
    const HERM_TOL: f64 = 1e-5;
    const UNITARY_TOL: f64 = 1e-3;
}

pub type C<T> = Complex<T>;

/// Dense complex square matrix.
pub type CMat<T> = DMatrix<Complex<T>>;

#[cfg(test)]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
