//! Scalar arithmetic for the max-plus semifield and its ghost extension.
//!
//! The base semifield is `ℝ ∪ {-∞}` with `⊕ = max` and `⊗ = +`; the additive
//! zero is `-∞` (written `eps`) and the multiplicative unit is `0`.  On top of
//! it sits the extension by a central symbol `i` with `i ⊗ i = 0`: elements
//! are pairs `a + ib`, added componentwise and multiplied by
//!
//! ```text
//! (a + ib) ⊗ (c + id) = (a⊗c ⊕ b⊗d) + i(b⊗c ⊕ a⊗d)
//! ```
//!
//! Elements of the form `a + ia` are *ghosts*; they form an absorbing ideal
//! and play the role of a zero set that remembers where two maxima tied.
//!
//! Scalars are `f64` with the platform `-∞` as `eps`, and equality is exact.
//! With integer (or short-decimal) inputs every `max`/`+` result is exactly
//! representable, so exact comparison is sound; callers feeding values that
//! round are on their own.

use std::fmt;
use std::ops::{Add, Mul};

/// An element of `ℝ ∪ {-∞}`: either the additive zero `eps` or a finite real.
///
/// `x + y` is tropical addition (`max`), `x * y` is tropical multiplication
/// (numeric `+` with `eps` absorbing).
#[derive(Clone, Copy)]
pub struct ExtReal(f64);

impl ExtReal {
    /// The additive zero `-∞`.
    pub const EPS: ExtReal = ExtReal(f64::NEG_INFINITY);

    /// The multiplicative unit `0`.
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Wraps a finite value.  Panics on `NaN` and infinities; `-0.0` is
    /// normalized to `+0.0` so that equal values have equal bits.
    pub fn finite(value: f64) -> ExtReal {
        assert!(value.is_finite(), "scalar must be finite, got {value}");
        ExtReal(value + 0.0)
    }

    pub fn is_eps(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The underlying value; `None` for `eps`.
    pub fn value(self) -> Option<f64> {
        if self.is_eps() {
            None
        } else {
            Some(self.0)
        }
    }

    /// The underlying value with `eps` mapped to `-∞`.
    pub fn raw(self) -> f64 {
        self.0
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // No NaN can be constructed, so the order is total.
        self.0.partial_cmp(&other.0).expect("ExtReal is never NaN")
    }
}

impl std::hash::Hash for ExtReal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

/// Tropical addition: `max`, with `eps` neutral.
impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        self.max(rhs)
    }
}

/// Tropical multiplication: numeric `+`, with `eps` absorbing.
impl Mul for ExtReal {
    type Output = ExtReal;

    // In this semiring, multiplication *is* numeric addition.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: ExtReal) -> ExtReal {
        // -∞ + x = -∞ in IEEE arithmetic, and +∞/NaN never arise because
        // both operands are finite or -∞.
        ExtReal(self.0 + rhs.0)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_eps() {
            write!(f, "eps")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A pair `a + ib` over the extended reals.
///
/// The pair is stored as written: `(3, 3)` stays a pair and is not collapsed
/// into a tagged ghost.  Equality is componentwise and exact.  No order is
/// defined on pairs; only the component order exists.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuperScalar {
    /// The `a` of `a + ib`.
    pub re: ExtReal,
    /// The `b` of `a + ib`.
    pub gh: ExtReal,
}

impl SuperScalar {
    /// The additive zero `eps + i·eps`.
    pub const EPS: SuperScalar = SuperScalar {
        re: ExtReal::EPS,
        gh: ExtReal::EPS,
    };

    /// The multiplicative unit `0 + i·eps`.
    pub const ONE: SuperScalar = SuperScalar {
        re: ExtReal::ZERO,
        gh: ExtReal::EPS,
    };

    /// The adjoined symbol `i = eps + i·0`; satisfies `I * I == ONE`.
    pub const I: SuperScalar = SuperScalar {
        re: ExtReal::EPS,
        gh: ExtReal::ZERO,
    };

    pub fn new(re: ExtReal, gh: ExtReal) -> SuperScalar {
        SuperScalar { re, gh }
    }

    /// `a + i·eps` for finite `a`.
    pub fn real(a: f64) -> SuperScalar {
        SuperScalar::new(ExtReal::finite(a), ExtReal::EPS)
    }

    /// The ghost `a + ia` for finite `a`.
    pub fn ghost(a: f64) -> SuperScalar {
        let v = ExtReal::finite(a);
        SuperScalar::new(v, v)
    }

    /// True iff both components are `eps`.  Note that `eps + i·3` is *not*
    /// zero: a ghost-only element is a nonzero scalar.
    pub fn is_eps(self) -> bool {
        self.re.is_eps() && self.gh.is_eps()
    }

    /// True iff the element lies in the ghost ideal, i.e. `re == gh`
    /// (both `eps`, or equal finite values).
    pub fn is_ghost(self) -> bool {
        self.re == self.gh
    }

    /// `re ⊕ gh`, the projection onto the base semifield used for
    /// cycle-mean weights.
    pub fn magnitude(self) -> ExtReal {
        self.re + self.gh
    }
}

/// Componentwise `max`; idempotent, with `EPS` neutral.
impl Add for SuperScalar {
    type Output = SuperScalar;

    fn add(self, rhs: SuperScalar) -> SuperScalar {
        SuperScalar::new(self.re + rhs.re, self.gh + rhs.gh)
    }
}

/// `(a+ib)(c+id) = (ac ⊕ bd) + i(bc ⊕ ad)` in max-plus arithmetic.
impl Mul for SuperScalar {
    type Output = SuperScalar;

    fn mul(self, rhs: SuperScalar) -> SuperScalar {
        let (a, b) = (self.re, self.gh);
        let (c, d) = (rhs.re, rhs.gh);
        SuperScalar::new(a * c + b * d, b * c + a * d)
    }
}

impl fmt::Display for SuperScalar {
    /// `eps` for the zero, a bare number for `a + i·eps`, `[a,b]` otherwise,
    /// matching the text form the parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_eps() {
            write!(f, "eps")
        } else if self.gh.is_eps() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "[{},{}]", self.re, self.gh)
        }
    }
}

impl fmt::Debug for SuperScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(v: f64) -> ExtReal {
        ExtReal::finite(v)
    }

    fn ss(re: ExtReal, gh: ExtReal) -> SuperScalar {
        SuperScalar::new(re, gh)
    }

    #[test]
    fn base_addition_is_max() {
        assert_eq!(fin(3.0) + fin(5.0), fin(5.0));
        assert_eq!(ExtReal::EPS + fin(-7.0), fin(-7.0));
        assert_eq!(fin(-2.0) + fin(-2.0), fin(-2.0));
    }

    #[test]
    fn base_multiplication_is_plus() {
        assert_eq!(fin(3.0) * fin(5.0), fin(8.0));
        assert_eq!(ExtReal::EPS * fin(7.0), ExtReal::EPS);
        assert_eq!(ExtReal::ZERO * fin(4.5), fin(4.5));
    }

    #[test]
    fn eps_is_below_everything() {
        assert!(ExtReal::EPS < fin(-1e18));
        assert_eq!(ExtReal::EPS, ExtReal::EPS);
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(fin(-0.0), fin(0.0));
        assert_eq!(fin(-0.0).raw().to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn pair_addition_is_componentwise() {
        let x = ss(fin(1.0), fin(0.0));
        let y = ss(fin(2.0), ExtReal::EPS);
        assert_eq!(x + y, ss(fin(2.0), fin(0.0)));
        assert_eq!(SuperScalar::EPS + x, x);
        assert_eq!(x + x, x);
    }

    #[test]
    fn pair_product_follows_the_twist() {
        // (1+i0)(2+ieps) = (max(1+2, 0+eps)) + i(max(0+2, 1+eps)) = 3+i2
        let x = ss(fin(1.0), fin(0.0));
        let y = ss(fin(2.0), ExtReal::EPS);
        assert_eq!(x * y, ss(fin(3.0), fin(2.0)));

        // ghost absorption: (2+i2)(5+i1) = 7+i7
        let g = SuperScalar::ghost(2.0);
        let h = ss(fin(5.0), fin(1.0));
        assert_eq!(g * h, SuperScalar::ghost(7.0));
    }

    #[test]
    fn i_squared_is_one() {
        assert_eq!(SuperScalar::I * SuperScalar::I, SuperScalar::ONE);
    }

    #[test]
    fn eps_and_ghost_predicates() {
        assert!(SuperScalar::EPS.is_eps());
        assert!(!SuperScalar::real(3.0).is_eps());
        assert!(!SuperScalar::I.is_eps());

        assert!(SuperScalar::ghost(2.0).is_ghost());
        assert!(SuperScalar::EPS.is_ghost());
        assert!(!ss(fin(2.0), fin(3.0)).is_ghost());
    }

    #[test]
    fn display_matches_text_form() {
        assert_eq!(SuperScalar::EPS.to_string(), "eps");
        assert_eq!(SuperScalar::real(3.0).to_string(), "3");
        assert_eq!(SuperScalar::ghost(3.0).to_string(), "[3,3]");
        assert_eq!(ss(ExtReal::EPS, fin(2.0)).to_string(), "[eps,2]");
        assert_eq!(SuperScalar::real(-1.5).to_string(), "-1.5");
    }

    pub fn arb_ext_real() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            1 => Just(ExtReal::EPS),
            4 => (-20i32..=20).prop_map(|v| ExtReal::finite(v as f64)),
        ]
    }

    pub fn arb_scalar() -> impl Strategy<Value = SuperScalar> {
        prop_oneof![
            3 => (arb_ext_real(), arb_ext_real()).prop_map(|(re, gh)| SuperScalar::new(re, gh)),
            1 => arb_ext_real().prop_map(|v| SuperScalar::new(v, v)),
            1 => Just(SuperScalar::EPS),
        ]
    }

    proptest! {
        #[test]
        fn addition_laws(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x + x, x);
            prop_assert_eq!(x + SuperScalar::EPS, x);
        }

        #[test]
        fn multiplication_laws(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * SuperScalar::ONE, x);
            prop_assert_eq!(x * SuperScalar::EPS, SuperScalar::EPS);
        }

        #[test]
        fn distributivity(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(x * (y + z), (x * y) + (x * z));
        }

        #[test]
        fn no_zero_divisors(x in arb_scalar(), y in arb_scalar()) {
            if !x.is_eps() && !y.is_eps() {
                prop_assert!(!(x * y).is_eps());
            }
        }

        #[test]
        fn ghosts_absorb(x in arb_scalar(), y in arb_scalar()) {
            if x.is_ghost() {
                prop_assert!((x * y).is_ghost());
                prop_assert!((y * x).is_ghost());
            }
            if x.is_ghost() && y.is_ghost() {
                prop_assert!((x + y).is_ghost());
            }
        }
    }
}
