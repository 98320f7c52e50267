//! Fixed-length bitmap with word-level shifts.
//!
//! Bits past `len` are always zero; every mutating method restores that.

const W: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(W)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits { len, words: vec![u64::MAX; len.div_ceil(W)] };
        b.mask_tail();
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / W] >> (i % W) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        if v {
            self.words[i / W] |= 1 << (i % W);
        } else {
            self.words[i / W] &= !(1 << (i % W));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * W + w.trailing_zeros() as usize)
    }

    /// First set bit at index `>= from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / W;
        let mut w = self.words[wi] & (u64::MAX << (from % W));
        loop {
            if w != 0 {
                return Some(wi * W + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * W + b)
            })
        })
    }

    pub fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        for a in self.words.iter_mut().skip(other.words.len()) {
            *a = 0;
        }
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        self.mask_tail();
    }

    pub fn not(&self) -> Bits {
        let mut out = Bits { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        out.mask_tail();
        out
    }

    /// `self[i] &= other[i + shift]`; positions past the end of `other` read as zero.
    pub fn and_shifted_down(&mut self, other: &Bits, shift: usize) {
        let (ws, bs) = (shift / W, shift % W);
        let n = other.words.len();
        for (i, a) in self.words.iter_mut().enumerate() {
            let src = i + ws;
            let lo = if src < n { other.words[src] >> bs } else { 0 };
            let hi = if bs != 0 && src + 1 < n { other.words[src + 1] << (W - bs) } else { 0 };
            *a &= lo | hi;
        }
    }

    /// New bitmap of the same length with `out[i] = self[i + shift]`.
    pub fn shifted_down(&self, shift: usize) -> Bits {
        let mut out = Bits::ones(self.len);
        out.and_shifted_down(self, shift);
        out
    }

    /// New bitmap of the same length with `out[i + shift] = self[i]`, truncated at `len`.
    pub fn shifted_up(&self, shift: usize) -> Bits {
        let mut out = Bits::zeros(self.len);
        let (ws, bs) = (shift / W, shift % W);
        for i in ws..out.words.len() {
            let src = i - ws;
            let lo = self.words[src] << bs;
            let hi = if bs != 0 && src >= 1 { self.words[src - 1] >> (W - bs) } else { 0 };
            out.words[i] = lo | hi;
        }
        out.mask_tail();
        out
    }

    /// True iff every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words.iter().enumerate().all(|(i, &a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// Copy of the bit range `[start, start + len)`; positions past the end read as zero.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        let mut out = Bits::ones(len);
        out.and_shifted_down(self, start);
        out
    }

    /// Copy of `len` bits where `out[j] = self[j + offset]`, reading zero outside `self`.
    pub fn window_slice(&self, offset: i64, len: usize) -> Bits {
        if offset >= 0 {
            self.slice(offset as usize, len)
        } else {
            let pad = offset.unsigned_abs() as usize;
            let mut out = self.slice(0, len);
            out = out.shifted_up(pad);
            out
        }
    }

    /// Clears every bit at index `>= from`.
    pub fn truncate_from(&mut self, from: usize) {
        if from >= self.len {
            return;
        }
        let wi = from / W;
        self.words[wi] &= (1u64 << (from % W)).wrapping_sub(1);
        for w in &mut self.words[wi + 1..] {
            *w = 0;
        }
    }

    fn mask_tail(&mut self) {
        let r = self.len % W;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let v: Vec<bool> = iter.into_iter().collect();
        let mut b = Bits::zeros(v.len());
        for (i, x) in v.into_iter().enumerate() {
            if x {
                b.set(i, true);
            }
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(v: &[bool]) -> Bits {
        v.iter().copied().collect()
    }

    proptest! {
        #[test]
        fn shifts_match_naive(v in proptest::collection::vec(any::<bool>(), 0..300), s in 0usize..320) {
            let b = naive(&v);
            let down = b.shifted_down(s);
            let up = b.shifted_up(s);
            for i in 0..v.len() {
                prop_assert_eq!(down.get(i), v.get(i + s).copied().unwrap_or(false));
                prop_assert_eq!(up.get(i), i >= s && v[i - s]);
            }
            prop_assert_eq!(b.iter_ones().collect::<Vec<_>>(),
                (0..v.len()).filter(|&i| v[i]).collect::<Vec<_>>());
            prop_assert_eq!(b.next_one(s), (s..v.len()).find(|&i| v[i]));
        }

        #[test]
        fn truncate_and_slice(v in proptest::collection::vec(any::<bool>(), 1..300), s in 0usize..300, n in 0usize..300) {
            let b = naive(&v);
            let mut t = b.clone();
            t.truncate_from(s);
            let sl = b.slice(s, n);
            for (i, &x) in v.iter().enumerate() {
                prop_assert_eq!(t.get(i), i < s && x);
            }
            for i in 0..n {
                prop_assert_eq!(sl.get(i), v.get(s + i).copied().unwrap_or(false));
            }
            let neg = b.window_slice(-(s as i64), n);
            for i in 0..n {
                prop_assert_eq!(neg.get(i), i >= s && v.get(i - s).copied().unwrap_or(false));
            }
        }
    }

    #[test]
    fn not_respects_length() {
        let b = Bits::zeros(70).not();
        assert_eq!(b.count_ones(), 70);
        assert!(Bits::zeros(70).is_subset_of(&b));
        assert!(!b.is_subset_of(&Bits::zeros(70)));
    }
}
