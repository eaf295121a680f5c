use std::cmp::Ordering;

use crate::context::{Context, Gen, Parity};

/// A canonical monomial: exponents of the even generators (indexed by even
/// slot) and the set of odd generators present (bit `s` = odd slot `s`).
///
/// The odd part is implicitly ordered by slot, i.e. by declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) even: Vec<u32>,
    pub(crate) odd: u64,
}

impl Monomial {
    pub fn one(ctx: &Context) -> Monomial {
        Monomial { even: vec![0; ctx.n_even()], odd: 0 }
    }

    pub fn generator(ctx: &Context, g: Gen) -> Monomial {
        let mut m = Monomial::one(ctx);
        let slot = ctx.slot(g);
        match ctx.parity(g) {
            Parity::Even => m.even[slot] = 1,
            Parity::Odd => m.odd = 1 << slot,
        }
        m
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_bits(&self) -> u64 {
        self.odd
    }

    /// Odd slots present, increasing.
    pub fn odd_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |s| self.odd & (1u64 << s) != 0)
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd_count())
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd_count()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    pub fn exponent(&self, ctx: &Context, g: Gen) -> u32 {
        let slot = ctx.slot(g);
        match ctx.parity(g) {
            Parity::Even => self.even[slot],
            Parity::Odd => u32::from(self.odd & (1 << slot) != 0),
        }
    }

    /// Product of `self` (left) and `other` (right). Returns `None` when an odd
    /// generator repeats, otherwise the product and whether the reordering
    /// sign is negative.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let negative = merge_sign(self.odd, other.odd);
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        Some((Monomial { even, odd: self.odd | other.odd }, negative))
    }

    /// Left derivative by one generator: the multiplicity factor and the
    /// reduced monomial, with `true` when a sign flip occurs.
    pub fn left_deriv(&self, ctx: &Context, g: Gen) -> Option<(u32, Monomial, bool)> {
        let slot = ctx.slot(g);
        match ctx.parity(g) {
            Parity::Even => {
                let e = self.even[slot];
                if e == 0 {
                    return None;
                }
                let mut m = self.clone();
                m.even[slot] -= 1;
                Some((e, m, false))
            }
            Parity::Odd => {
                let bit = 1u64 << slot;
                if self.odd & bit == 0 {
                    return None;
                }
                let preceding = (self.odd & (bit - 1)).count_ones();
                let mut m = self.clone();
                m.odd &= !bit;
                Some((1, m, preceding % 2 == 1))
            }
        }
    }

    /// The even part alone (odd set cleared).
    pub fn body(&self) -> Monomial {
        Monomial { even: self.even.clone(), odd: 0 }
    }
}

/// Parity of the number of transpositions needed to merge-sort the
/// concatenation `left ++ right` of two disjoint increasing odd lists.
pub(crate) fn merge_sign(left: u64, right: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = right;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of `left` strictly greater than j must hop over it
        let above = if j >= 63 { 0 } else { left >> (j + 1) };
        inversions += above.count_ones();
    }
    inversions % 2 == 1
}

impl Ord for Monomial {
    /// Graded order: total degree, then graded-lex on the even exponents,
    /// then lexicographic on the sorted odd slot lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.even.cmp(&self.even))
            .then_with(|| other.odd.reverse_bits().cmp(&self.odd.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force inversion count on explicit lists.
    fn inversions(left: &[u32], right: &[u32]) -> usize {
        let all: Vec<u32> = left.iter().chain(right).copied().collect();
        let mut n = 0;
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                if all[a] > all[b] {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn merge_sign_matches_bubble_sort_count() {
        for left in 0u64..64 {
            for right in 0u64..64 {
                if left & right != 0 {
                    continue;
                }
                let l: Vec<u32> = (0..6).filter(|b| left & (1 << b) != 0).collect();
                let r: Vec<u32> = (0..6).filter(|b| right & (1 << b) != 0).collect();
                assert_eq!(merge_sign(left, right), inversions(&l, &r) % 2 == 1);
            }
        }
    }

    #[test]
    fn high_slot_does_not_overflow() {
        assert!(!merge_sign(1 << 63, 0));
        assert!(merge_sign(1 << 63, 1));
        assert!(!merge_sign(1, 1 << 63));
    }
}
