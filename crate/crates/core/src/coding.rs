//! Strictly dominating pairing on unbounded naturals.
//!
//! `pair(a, b)` is injective and strictly greater than both arguments.
//! Structural codes built from it therefore strictly exceed the codes of
//! all their parts, which keeps every numbering derived from it
//! well-founded: no code can occur inside the object it codes.

use num_bigint::BigUint;

/// Shifted Cantor pairing: `(a+b+1)(a+b+2)/2 + b + 1`.
///
/// Injective, and `pair(a, b) > a` and `pair(a, b) > b` for all inputs.
pub(crate) fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b + 1u32;
    let tri = (&s * (&s + 1u32)) >> 1;
    tri + b + 1u32
}

pub(crate) fn pair_tag(tag: u32, payload: &BigUint) -> BigUint {
    pair(&BigUint::from(tag), payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: u32, b: u32) -> BigUint {
        pair(&BigUint::from(a), &BigUint::from(b))
    }

    #[test]
    fn injective_on_grid() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..40u32 {
            for b in 0..40u32 {
                assert!(seen.insert(p(a, b)), "collision at ({a},{b})");
            }
        }
    }

    #[test]
    fn strictly_dominates_both_arguments() {
        for a in 0..40u32 {
            for b in 0..40u32 {
                let v = p(a, b);
                assert!(v > BigUint::from(a));
                assert!(v > BigUint::from(b));
            }
        }
    }

    #[test]
    fn smallest_value_is_two() {
        assert_eq!(p(0, 0), BigUint::from(2u32));
    }
}
