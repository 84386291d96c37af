/// A subset of a frame, encoded as a bitmask over the frame's element order.
///
/// The mask is stored as 64-bit words so frames are not limited to 64
/// elements; bits at positions `>= universe` are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    words: Box<[u64]>,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(64).max(1)
}

impl Subset {
    /// The empty set over a frame of `universe` elements.
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; word_count(universe)].into_boxed_slice(),
        }
    }

    /// The full frame as a subset.
    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for pos in 0..universe {
            s.words[pos / 64] |= 1u64 << (pos % 64);
        }
        s
    }

    /// Singleton containing only the element at `pos`.
    pub fn singleton(pos: usize, universe: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(pos);
        s
    }

    /// Build a subset from element positions.
    pub fn from_positions(positions: &[usize], universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for &pos in positions {
            s.insert(pos);
        }
        s
    }

    fn insert(&mut self, pos: usize) {
        self.words[pos / 64] |= 1u64 << (pos % 64);
    }

    pub fn contains(&self, pos: usize) -> bool {
        match self.words.get(pos / 64) {
            Some(w) => w & (1u64 << (pos % 64)) != 0,
            None => false,
        }
    }

    /// Set intersection. Both subsets must come from the same frame.
    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.words.len(), other.words.len());
        Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Number of elements in the subset.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the elements, ascending.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        for (wi, w) in self.words.iter().enumerate() {
            let mut bits = *w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// True when every element position is below `universe`.
    pub fn fits_universe(&self, universe: usize) -> bool {
        if self.words.len() != word_count(universe) {
            return false;
        }
        self.positions().iter().all(|&p| p < universe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_singleton() {
        let full = Subset::full(70);
        assert_eq!(full.len(), 70);
        assert!(full.contains(69));
        let s = Subset::singleton(65, 70);
        assert_eq!(s.positions(), vec![65]);
        assert_eq!(s.intersect(&full), s);
    }

    #[test]
    fn intersection_and_empty() {
        let a = Subset::from_positions(&[0, 2, 5], 6);
        let b = Subset::from_positions(&[1, 3], 6);
        assert!(a.intersect(&b).is_empty());
        let c = Subset::from_positions(&[2, 3, 5], 6);
        assert_eq!(a.intersect(&c).positions(), vec![2, 5]);
    }
}
