//! Interval sets: the concrete non-atomic measure space.
//!
//! A measurable set is a finite union of disjoint half-open rational
//! intervals `[lo, hi)`. Half-open endpoints make the algebra closed and keep
//! boundary touches literally empty, so no measure-zero corrections are ever
//! needed. Every [`IntervalSet`] is held in a unique normal form: parts sorted
//! by `lo`, pairwise disjoint, and non-adjacent (adjacent parts are merged).
//! Two sets with the same pointwise membership therefore have identical part
//! lists, and `==` is set equality.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Half-open interval `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::EmptyInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, p: &Rational) -> bool {
        &self.lo <= p && p < &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Normalized finite union of disjoint half-open intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    /// The empty set.
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    /// Builds a set from arbitrary intervals, normalizing overlaps and
    /// adjacency away.
    pub fn new(parts: Vec<Interval>) -> Self {
        IntervalSet {
            parts: normalize(parts),
        }
    }

    /// Single interval `[lo, hi)`.
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(IntervalSet {
            parts: vec![Interval::new(lo, hi)?],
        })
    }

    /// Builds a set from `(lo, hi)` pairs; each pair must satisfy `lo < hi`.
    pub fn from_pairs(pairs: Vec<(Rational, Rational)>) -> Result<Self> {
        let parts = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(parts))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total length: the measure ν of the set, additive over disjoint parts.
    pub fn measure(&self) -> Rational {
        let mut total = Rational::zero();
        for p in &self.parts {
            total += p.length();
        }
        total
    }

    pub fn contains_point(&self, p: &Rational) -> bool {
        match self.parts.binary_search_by(|iv| iv.lo.cmp(p)) {
            Ok(_) => true,
            Err(0) => false,
            Err(i) => p < &self.parts[i - 1].hi,
        }
    }

    /// Pointwise union.
    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        parts.extend(self.parts.iter().cloned());
        parts.extend(other.parts.iter().cloned());
        IntervalSet::new(parts)
    }

    /// Union of many sets at once; normalizes a single time.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> IntervalSet {
        let mut parts = Vec::new();
        for s in sets {
            parts.extend(s.parts.iter().cloned());
        }
        IntervalSet::new(parts)
    }

    /// Pointwise intersection.
    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let a = &self.parts[i];
            let b = &other.parts[j];
            let lo = if a.lo >= b.lo { &a.lo } else { &b.lo };
            let hi = if a.hi <= b.hi { &a.hi } else { &b.hi };
            if lo < hi {
                out.push(Interval {
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        debug_assert!(is_normalized(&out));
        IntervalSet { parts: out }
    }

    /// Pointwise difference `self \ other`.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let mut j = 0;
        for a in &self.parts {
            let mut cursor = a.lo.clone();
            // Skip cut intervals that end at or before this part.
            while j < other.parts.len() && other.parts[j].hi <= a.lo {
                j += 1;
            }
            let mut k = j;
            while k < other.parts.len() && other.parts[k].lo < a.hi {
                let b = &other.parts[k];
                if b.lo > cursor {
                    out.push(Interval {
                        lo: cursor.clone(),
                        hi: b.lo.clone(),
                    });
                }
                if b.hi >= a.hi {
                    cursor = a.hi.clone();
                    break;
                }
                if b.hi > cursor {
                    cursor = b.hi.clone();
                }
                k += 1;
            }
            if cursor < a.hi {
                out.push(Interval {
                    lo: cursor,
                    hi: a.hi.clone(),
                });
            }
        }
        debug_assert!(is_normalized(&out));
        IntervalSet { parts: out }
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Leftmost subset of exact measure `c`: whole parts are taken left to
    /// right and the last one is cut at `lo + remainder`. Deterministic, and
    /// monotone in `c` (a smaller carve is a subset of a larger one).
    pub fn carve(&self, c: &Rational) -> Result<IntervalSet> {
        let available = self.measure();
        if c.is_negative() || *c > available {
            return Err(Error::DemandExceedsMeasure {
                requested: c.clone(),
                available,
            });
        }
        let mut out = Vec::new();
        let mut need = c.clone();
        for part in &self.parts {
            if need.is_zero() {
                break;
            }
            let len = part.length();
            if len <= need {
                out.push(part.clone());
                need -= len;
            } else {
                let hi = &part.lo + &need;
                out.push(Interval {
                    lo: part.lo.clone(),
                    hi,
                });
                need.set_zero();
            }
        }
        debug_assert!(is_normalized(&out));
        Ok(IntervalSet { parts: out })
    }

    /// Splits the set into consecutive leftmost pieces of the given sizes.
    /// All sizes must be positive and sum to the measure exactly; the pieces
    /// are pairwise disjoint, exact, and reassemble to `self`.
    pub fn partition(&self, sizes: &[Rational]) -> Result<Vec<IntervalSet>> {
        for (index, r) in sizes.iter().enumerate() {
            if !r.is_positive() {
                return Err(Error::NonpositivePart {
                    index,
                    value: r.clone(),
                });
            }
        }
        let mut sum = Rational::zero();
        for r in sizes {
            sum += r;
        }
        let measure = self.measure();
        if sum != measure {
            return Err(Error::PartitionSumMismatch { sum, measure });
        }

        let mut pieces = Vec::with_capacity(sizes.len());
        let mut part_idx = 0;
        let mut cursor = self
            .parts
            .first()
            .map(|p| p.lo.clone())
            .unwrap_or_else(Rational::zero);
        for size in sizes {
            let mut need = size.clone();
            let mut acc = Vec::new();
            while need.is_positive() {
                let part = &self.parts[part_idx];
                let avail = &part.hi - &cursor;
                if avail <= need {
                    acc.push(Interval {
                        lo: cursor.clone(),
                        hi: part.hi.clone(),
                    });
                    need -= avail;
                    part_idx += 1;
                    if part_idx < self.parts.len() {
                        cursor = self.parts[part_idx].lo.clone();
                    }
                } else {
                    let hi = &cursor + &need;
                    acc.push(Interval {
                        lo: cursor.clone(),
                        hi: hi.clone(),
                    });
                    cursor = hi;
                    need.set_zero();
                }
            }
            debug_assert!(is_normalized(&acc));
            pieces.push(IntervalSet { parts: acc });
        }
        Ok(pieces)
    }

    /// Scales every endpoint by a positive factor. Measures scale by the
    /// same factor.
    pub fn scale(&self, factor: &Rational) -> Result<IntervalSet> {
        if !factor.is_positive() {
            return Err(Error::NonpositiveScale {
                value: factor.clone(),
            });
        }
        let parts = self
            .parts
            .iter()
            .map(|p| Interval {
                lo: &p.lo * factor,
                hi: &p.hi * factor,
            })
            .collect();
        Ok(IntervalSet { parts })
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn normalize(mut parts: Vec<Interval>) -> Vec<Interval> {
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for p in parts {
        match out.last_mut() {
            Some(last) if p.lo <= last.hi => {
                if p.hi > last.hi {
                    last.hi = p.hi;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

fn is_normalized(parts: &[Interval]) -> bool {
    parts.windows(2).all(|w| w[0].hi < w[1].lo) && parts.iter().all(|p| p.lo < p.hi)
}

/// The ambient space `(Ω, S, ν)`: a universe of positive measure that all
/// instance subsets live inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpace {
    universe: IntervalSet,
}

impl MeasureSpace {
    pub fn new(universe: IntervalSet) -> Result<Self> {
        if universe.measure().is_positive() {
            Ok(MeasureSpace { universe })
        } else {
            Err(Error::EmptyUniverse)
        }
    }

    pub fn universe(&self) -> &IntervalSet {
        &self.universe
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::{iset, probe_points};
    use super::*;
    use crate::rational::{integer, rational};
    use proptest::prelude::*;

    #[test]
    fn measure_examples() {
        assert_eq!(IntervalSet::empty().measure(), integer(0));
        assert_eq!(iset(&[(0, 1)], 1).measure(), integer(1));
        // [0,1/3) ∪ [1/2,1) has measure 5/6
        let s = IntervalSet::from_pairs(vec![
            (integer(0), rational(1, 3)),
            (rational(1, 2), integer(1)),
        ])
        .unwrap();
        assert_eq!(s.measure(), rational(5, 6));
    }

    #[test]
    fn set_algebra_examples() {
        let a = iset(&[(0, 2)], 1);
        let b = iset(&[(1, 3)], 1);
        assert_eq!(a.intersect(&b), iset(&[(1, 2)], 1));
        assert!(a.difference(&a).is_empty());
        // adjacency merges into the unique normal form
        let left = iset(&[(0, 1)], 2);
        let right = iset(&[(1, 2)], 2);
        assert_eq!(left.union(&right), iset(&[(0, 2)], 2));
        assert_eq!(left.union(&right).parts().len(), 1);
    }

    #[test]
    fn interval_rejects_empty() {
        assert!(matches!(
            Interval::new(integer(1), integer(1)),
            Err(Error::EmptyInterval { .. })
        ));
        assert!(Interval::new(integer(2), integer(1)).is_err());
    }

    #[test]
    fn carve_examples() {
        let unit = iset(&[(0, 1)], 1);
        assert_eq!(
            unit.carve(&rational(1, 2)).unwrap(),
            IntervalSet::interval(integer(0), rational(1, 2)).unwrap()
        );
        // carve([0,1/4) ∪ [1/2,1), 1/2) = [0,1/4) ∪ [1/2,3/4)
        let s = iset(&[(0, 1), (2, 4)], 4);
        assert_eq!(s.carve(&rational(1, 2)).unwrap(), iset(&[(0, 1), (2, 3)], 4));
        // full-measure carve is the identity
        assert_eq!(s.carve(&s.measure()).unwrap(), s);
        // zero carve is empty
        assert!(s.carve(&integer(0)).unwrap().is_empty());
    }

    #[test]
    fn carve_out_of_range() {
        let s = iset(&[(0, 1)], 1);
        assert!(matches!(
            s.carve(&integer(2)),
            Err(Error::DemandExceedsMeasure { .. })
        ));
        assert!(matches!(
            s.carve(&integer(-1)),
            Err(Error::DemandExceedsMeasure { .. })
        ));
    }

    #[test]
    fn partition_examples() {
        let unit = iset(&[(0, 1)], 1);
        let pieces = unit.partition(&[rational(1, 3), rational(2, 3)]).unwrap();
        assert_eq!(pieces[0], iset(&[(0, 1)], 3));
        assert_eq!(pieces[1], iset(&[(1, 3)], 3));

        let single = unit.partition(&[integer(1)]).unwrap();
        assert_eq!(single, vec![unit.clone()]);

        // partition([0,1/2) ∪ [1,3/2), [1/2,1/2]) = {[0,1/2), [1,3/2)}
        let s = iset(&[(0, 1), (2, 3)], 2);
        let halves = s.partition(&[rational(1, 2), rational(1, 2)]).unwrap();
        assert_eq!(halves[0], iset(&[(0, 1)], 2));
        assert_eq!(halves[1], iset(&[(2, 3)], 2));
    }

    #[test]
    fn partition_errors() {
        let unit = iset(&[(0, 1)], 1);
        assert!(matches!(
            unit.partition(&[rational(1, 2)]),
            Err(Error::PartitionSumMismatch { .. })
        ));
        assert!(matches!(
            unit.partition(&[integer(1), integer(0)]),
            Err(Error::NonpositivePart { .. })
        ));
    }

    #[test]
    fn display_forms() {
        let s = iset(&[(0, 1), (2, 3)], 2);
        assert_eq!(s.to_string(), "[0, 1/2) [1, 3/2)");
        assert_eq!(IntervalSet::empty().to_string(), "(empty)");
    }

    /// Strategy: small interval sets on a dyadic-ish grid.
    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        (
            proptest::collection::vec((0i64..40, 1i64..8), 0..5),
            1i64..9,
        )
            .prop_map(|(raw, den)| {
                let parts = raw
                    .into_iter()
                    .map(|(lo, len)| {
                        Interval::new(rational(lo, den), rational(lo + len, den)).unwrap()
                    })
                    .collect();
                IntervalSet::new(parts)
            })
    }

    proptest! {
        #[test]
        fn normal_form_unique(s in arb_set()) {
            // re-normalizing the parts changes nothing
            let again = IntervalSet::new(s.parts().to_vec());
            prop_assert_eq!(&again, &s);
        }

        #[test]
        fn pointwise_oracle(s in arb_set(), t in arb_set()) {
            // union / intersection / difference agree with membership at
            // every distinguishing sample point
            let u = s.union(&t);
            let i = s.intersect(&t);
            let d = s.difference(&t);
            for p in probe_points(&[&s, &t]) {
                let (in_s, in_t) = (s.contains_point(&p), t.contains_point(&p));
                prop_assert_eq!(u.contains_point(&p), in_s || in_t);
                prop_assert_eq!(i.contains_point(&p), in_s && in_t);
                prop_assert_eq!(d.contains_point(&p), in_s && !in_t);
            }
        }

        #[test]
        fn inclusion_exclusion(s in arb_set(), t in arb_set()) {
            let lhs = s.union(&t).measure() + s.intersect(&t).measure();
            prop_assert_eq!(lhs, s.measure() + t.measure());
        }

        #[test]
        fn additivity_on_disjoint(s in arb_set(), t in arb_set()) {
            let t = t.difference(&s);
            prop_assert_eq!(s.union(&t).measure(), s.measure() + t.measure());
        }

        #[test]
        fn carve_contract(s in arb_set(), num in 0i64..64) {
            let c = s.measure() * rational(num, 64);
            let carved = s.carve(&c).unwrap();
            prop_assert!(carved.is_subset_of(&s));
            prop_assert_eq!(carved.measure(), c);
        }

        #[test]
        fn carve_monotone(s in arb_set(), a in 0i64..64, b in 0i64..64) {
            let (a, b) = (a.min(b), a.max(b));
            let small = s.carve(&(s.measure() * rational(a, 64))).unwrap();
            let large = s.carve(&(s.measure() * rational(b, 64))).unwrap();
            prop_assert!(small.is_subset_of(&large));
        }

        #[test]
        fn partition_contract(s in arb_set(), weights in proptest::collection::vec(1i64..5, 1..5)) {
            prop_assume!(!s.is_empty());
            let total: i64 = weights.iter().sum();
            let sizes: Vec<Rational> = weights
                .iter()
                .map(|w| s.measure() * rational(*w, total))
                .collect();
            let pieces = s.partition(&sizes).unwrap();
            for (piece, size) in pieces.iter().zip(&sizes) {
                prop_assert!(piece.is_subset_of(&s));
                prop_assert_eq!(piece.measure(), size.clone());
            }
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    prop_assert!(pieces[i].is_disjoint_from(&pieces[j]));
                }
            }
            prop_assert_eq!(IntervalSet::union_all(pieces.iter()), s);
        }
    }
}
