//! Partial permutations on dense vertex indices.
//!
//! A [`PartialPermutation`] is an injective partial self-map of `0..n`. It is
//! used in two readings throughout the crate:
//!
//! * as a function `v ↦ π(v)`, composed and united like partial functions;
//! * as a token configuration, where `π(v)` is the destination of the token
//!   currently sitting on `v` and an undefined entry means "no token". Under
//!   this reading a transposition of two vertices exchanges their entries.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialPermutation {
    forward: Vec<Option<usize>>,
}

impl PartialPermutation {
    /// The nowhere-defined partial permutation on `n` vertices.
    pub fn empty(n: usize) -> Self {
        PartialPermutation {
            forward: vec![None; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        PartialPermutation {
            forward: (0..n).map(Some).collect(),
        }
    }

    /// Builds a partial permutation from `(source, target)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut forward = vec![None; n];
        let mut used = vec![false; n];
        for &(src, dst) in pairs {
            for v in [src, dst] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if forward[src].is_some() {
                return Err(Error::OverlappingDomains(src));
            }
            if used[dst] {
                return Err(Error::NotInjective(dst));
            }
            forward[src] = Some(dst);
            used[dst] = true;
        }
        Ok(PartialPermutation { forward })
    }

    /// Validates and wraps a forward array.
    pub fn from_forward(forward: Vec<Option<usize>>) -> Result<Self> {
        let n = forward.len();
        let mut used = vec![false; n];
        for &t in forward.iter().flatten() {
            if t >= n {
                return Err(Error::VertexOutOfRange { vertex: t, n });
            }
            if used[t] {
                return Err(Error::NotInjective(t));
            }
            used[t] = true;
        }
        Ok(PartialPermutation { forward })
    }

    /// Total permutation from an image vector (`targets[v] = π(v)`).
    pub fn from_total(targets: &[usize]) -> Result<Self> {
        Self::from_forward(targets.iter().map(|&t| Some(t)).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    pub fn get(&self, v: usize) -> Option<usize> {
        self.forward.get(v).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.forward
    }

    /// Number of mapped vertices, `|dom(π)|`.
    pub fn len(&self) -> usize {
        self.forward.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.iter().all(|t| t.is_none())
    }

    pub fn is_total(&self) -> bool {
        self.forward.iter().all(|t| t.is_some())
    }

    /// `(v, π(v))` for every `v ∈ dom(π)`, ascending in `v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| (v, t)))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs().map(|(v, _)| v)
    }

    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.forward.iter().flatten().copied().collect();
        img.sort_unstable();
        img
    }

    pub fn image_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &t in self.forward.iter().flatten() {
            mask[t] = true;
        }
        mask
    }

    pub fn inverse(&self) -> PartialPermutation {
        let mut back = vec![None; self.n()];
        for (v, t) in self.pairs() {
            back[t] = Some(v);
        }
        PartialPermutation { forward: back }
    }

    /// `(self ∘ inner)(x) = self(inner(x))`, defined where both steps are.
    pub fn compose(&self, inner: &PartialPermutation) -> Result<PartialPermutation> {
        if self.n() != inner.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: inner.n(),
            });
        }
        let forward = inner
            .forward
            .iter()
            .map(|t| t.and_then(|mid| self.forward[mid]))
            .collect();
        Ok(PartialPermutation { forward })
    }

    /// Union of two partial permutations with disjoint domains and images.
    pub fn union(&self, other: &PartialPermutation) -> Result<PartialPermutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let mine = self.image_mask();
        let mut forward = self.forward.clone();
        for (v, t) in other.pairs() {
            if forward[v].is_some() {
                return Err(Error::OverlappingDomains(v));
            }
            if mine[t] {
                return Err(Error::OverlappingImages(t));
            }
            forward[v] = Some(t);
        }
        Ok(PartialPermutation { forward })
    }

    /// Inserts `src ↦ dst`, failing if either side is already taken.
    pub fn insert(&mut self, src: usize, dst: usize) -> Result<()> {
        let n = self.n();
        for v in [src, dst] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if self.forward[src].is_some() {
            return Err(Error::OverlappingDomains(src));
        }
        if self.forward.contains(&Some(dst)) {
            return Err(Error::OverlappingImages(dst));
        }
        self.forward[src] = Some(dst);
        Ok(())
    }

    /// Deterministic completion: unmapped sources in ascending order receive
    /// the unused targets in ascending order.
    pub fn complete_arbitrary(&self) -> PartialPermutation {
        let used = self.image_mask();
        let mut free = (0..self.n()).filter(|&t| !used[t]);
        let forward = self
            .forward
            .iter()
            .map(|t| t.or_else(|| free.next()))
            .collect();
        PartialPermutation { forward }
    }

    /// Exchanges the entries at `u` and `v` (moves their tokens).
    pub fn swap_tokens(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        self.forward.swap(u, v);
        Ok(())
    }

    /// Non-mutating [`swap_tokens`](Self::swap_tokens).
    pub fn apply_swap(&self, u: usize, v: usize) -> Result<PartialPermutation> {
        let mut next = self.clone();
        next.swap_tokens(u, v)?;
        Ok(next)
    }

    /// True iff `π(v) = v` on the whole domain.
    pub fn is_resolved(&self) -> bool {
        self.pairs().all(|(v, t)| v == t)
    }

    /// Drops fixed points.
    pub fn without_fixed_points(&self) -> PartialPermutation {
        let forward = self
            .forward
            .iter()
            .enumerate()
            .map(|(v, t)| t.filter(|&t| t != v))
            .collect();
        PartialPermutation { forward }
    }
}

impl fmt::Debug for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}->{t}")?;
        }
        write!(f, "}}/{}", self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pp(n: usize, pairs: &[(usize, usize)]) -> PartialPermutation {
        PartialPermutation::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn compose_examples() {
        let g = pp(4, &[(1, 2)]);
        let f = pp(4, &[(2, 0)]);
        assert_eq!(f.compose(&g).unwrap(), pp(4, &[(1, 0)]));

        let g = pp(4, &[(0, 3), (1, 2)]);
        let id_on_targets = pp(4, &[(3, 3), (2, 2)]);
        assert_eq!(id_on_targets.compose(&g).unwrap(), g);

        let g = pp(4, &[(0, 1)]);
        let f = pp(4, &[(2, 3)]);
        assert!(f.compose(&g).unwrap().is_empty());

        assert_eq!(
            f.compose(&PartialPermutation::empty(5)),
            Err(Error::SizeMismatch { left: 4, right: 5 })
        );
    }

    #[test]
    fn union_examples() {
        let f = pp(4, &[(0, 1)]);
        let g = pp(4, &[(2, 3)]);
        assert_eq!(f.union(&g).unwrap(), pp(4, &[(0, 1), (2, 3)]));
        assert_eq!(PartialPermutation::empty(4).union(&g).unwrap(), g);
        let clash = pp(4, &[(2, 1)]);
        assert_eq!(f.union(&clash), Err(Error::OverlappingImages(1)));
        assert_eq!(
            f.union(&pp(4, &[(0, 2)])),
            Err(Error::OverlappingDomains(0))
        );
    }

    #[test]
    fn completion_examples() {
        let total = pp(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(total.complete_arbitrary(), total);
        assert_eq!(
            pp(3, &[(0, 2)]).complete_arbitrary(),
            pp(3, &[(0, 2), (1, 0), (2, 1)])
        );
        assert_eq!(
            PartialPermutation::empty(4).complete_arbitrary(),
            PartialPermutation::identity(4)
        );
    }

    #[test]
    fn swap_examples() {
        let p = pp(3, &[(0, 1)]);
        assert_eq!(p.apply_swap(0, 1).unwrap(), pp(3, &[(1, 1)]));
        assert_eq!(p.apply_swap(0, 2).unwrap().apply_swap(0, 2).unwrap(), p);
        let both = pp(2, &[(0, 1), (1, 0)]);
        assert_eq!(
            both.apply_swap(0, 1).unwrap(),
            PartialPermutation::identity(2)
        );
        assert_eq!(
            p.apply_swap(0, 3),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn resolved_examples() {
        assert!(PartialPermutation::identity(3).is_resolved());
        assert!(!pp(2, &[(0, 1)]).is_resolved());
        assert!(PartialPermutation::empty(5).is_resolved());
    }

    #[test]
    fn rejects_non_injective() {
        assert_eq!(
            PartialPermutation::from_pairs(3, &[(0, 1), (2, 1)]),
            Err(Error::NotInjective(1))
        );
        assert!(PartialPermutation::from_forward(vec![Some(5)]).is_err());
    }

    fn arb_partial(max_n: usize) -> impl Strategy<Value = PartialPermutation> {
        (1..max_n)
            .prop_flat_map(|n| {
                (
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                    proptest::collection::vec(any::<bool>(), n),
                )
            })
            .prop_map(|(targets, keep)| {
                let forward = (0..targets.len())
                    .map(|v| if keep[v] { Some(targets[v]) } else { None })
                    .collect();
                PartialPermutation::from_forward(forward).unwrap()
            })
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity_on_domain(p in arb_partial(12)) {
            let back = p.inverse().compose(&p).unwrap();
            for v in 0..p.n() {
                prop_assert_eq!(back.get(v), p.get(v).map(|_| v));
            }
        }

        #[test]
        fn completion_is_total_and_extends(p in arb_partial(12)) {
            let c = p.complete_arbitrary();
            prop_assert!(c.is_total());
            prop_assert!(PartialPermutation::from_forward(c.as_slice().to_vec()).is_ok());
            for (v, t) in p.pairs() {
                prop_assert_eq!(c.get(v), Some(t));
            }
        }

        #[test]
        fn union_restricts_to_left(p in arb_partial(12), split in 0usize..12) {
            let (mut left, mut right) = (PartialPermutation::empty(p.n()), PartialPermutation::empty(p.n()));
            for (v, t) in p.pairs() {
                if v < split { left.insert(v, t).unwrap() } else { right.insert(v, t).unwrap() }
            }
            let u = left.union(&right).unwrap();
            prop_assert_eq!(&u, &p);
            for (v, t) in left.pairs() {
                prop_assert_eq!(u.get(v), Some(t));
            }
        }

        #[test]
        fn swaps_preserve_target_multiset(p in arb_partial(12), a in 0usize..12, b in 0usize..12) {
            let (a, b) = (a % p.n(), b % p.n());
            let q = p.apply_swap(a, b).unwrap();
            prop_assert_eq!(q.image(), p.image());
        }
    }
}
