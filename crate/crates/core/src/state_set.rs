use std::fmt;

/// A fixed-width bitset over the state indices of one automaton.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    width: usize,
    bits: Vec<u64>,
}

impl StateSet {
    pub fn empty(width: usize) -> Self {
        StateSet {
            width,
            bits: vec![0; width.div_ceil(64)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for q in 0..width {
            s.insert(q);
        }
        s
    }

    pub fn singleton(width: usize, q: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(q);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(width: usize, iter: I) -> Self {
        let mut s = Self::empty(width);
        for q in iter {
            s.insert(q);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn insert(&mut self, q: usize) {
        debug_assert!(q < self.width);
        self.bits[q / 64] |= 1 << (q % 64);
    }

    #[inline]
    pub fn remove(&mut self, q: usize) {
        debug_assert!(q < self.width);
        self.bits[q / 64] &= !(1 << (q % 64));
    }

    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        debug_assert!(q < self.width);
        self.bits[q / 64] & (1 << (q % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &block)| {
            let mut block = block;
            std::iter::from_fn(move || {
                if block == 0 {
                    return None;
                }
                let bit = block.trailing_zeros() as usize;
                block &= block - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = StateSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert!(s.contains(64));
        assert!(!s.contains(63));
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        s.remove(64);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn subset_and_union() {
        let a = StateSet::from_iter(10, [1, 3]);
        let mut b = StateSet::from_iter(10, [1]);
        assert!(b.is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        b.union_with(&a);
        assert_eq!(b, a);
        assert!(a.intersects(&b));
    }
}
