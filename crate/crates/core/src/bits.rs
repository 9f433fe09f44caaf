/// Fixed-width bit set used for per-region label sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(width: usize) -> Self {
        Bits(vec![0; width.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
}

#[cfg(test)]
mod tests {
    use super::Bits;

    #[test]
    fn basic_ops() {
        let mut a = Bits::new(130);
        a.insert(3);
        a.insert(129);
        let mut b = Bits::new(130);
        b.insert(64);
        b.union_with(&a);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(b.count(), 3);
        assert!(!b.contains(4));
        assert!(Bits::new(10).is_empty());
    }
}
