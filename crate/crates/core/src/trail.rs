//! Shared-frame bitstrings for hit sets inside a single decision.
//!
//! Within one decider call every return-time set is eventually periodic
//! with a common frame (threshold, period) derived from the power traces,
//! so sets become fixed-length bit vectors and the hot predicates (AND
//! emptiness, finiteness, tail coverage) run without allocating.

use crate::natset::EventuallyPeriodicSet;

/// Common eventual-periodicity frame: positions 1..=thr are the prefix,
/// positions thr+1..=thr+per repeat forever.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Frame {
    pub thr: usize,
    pub per: usize,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.thr + self.per
    }
}

/// Bitstring over a frame; bit k (0-based) is membership of position k+1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Trail {
    pub frame: Frame,
    pub words: Vec<u64>,
}

fn word_count(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl Trail {
    pub fn empty(frame: Frame) -> Self {
        Trail { frame, words: vec![0; word_count(frame.len())] }
    }

    pub fn from_fn(frame: Frame, f: impl Fn(usize) -> bool) -> Self {
        let mut t = Trail::empty(frame);
        for pos in 1..=frame.len() {
            if f(pos) {
                t.set(pos);
            }
        }
        t
    }

    pub fn set(&mut self, pos: usize) {
        debug_assert!(pos >= 1 && pos <= self.frame.len());
        self.words[(pos - 1) / 64] |= 1 << ((pos - 1) % 64);
    }

    pub fn contains(&self, pos: usize) -> bool {
        debug_assert!(pos >= 1);
        let idx = if pos <= self.frame.len() {
            pos - 1
        } else {
            self.frame.thr + (pos - self.frame.thr - 1) % self.frame.per
        };
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn cycle_mask_word(&self, w: usize) -> u64 {
        // Bits of word w that fall in the periodic region [thr, thr+per).
        let lo = self.frame.thr;
        let hi = self.frame.len();
        let start = w * 64;
        let mut mask = 0u64;
        for b in 0..64 {
            let idx = start + b;
            if idx >= lo && idx < hi {
                mask |= 1 << b;
            }
        }
        mask
    }

    /// No element in the periodic region: the set is finite.
    pub fn is_finite(&self) -> bool {
        (0..self.words.len()).all(|w| self.words[w] & self.cycle_mask_word(w) == 0)
    }

    /// Every periodic position present: the set is cofinite.
    pub fn is_cofinite(&self) -> bool {
        (0..self.words.len()).all(|w| {
            let m = self.cycle_mask_word(w);
            self.words[w] & m == m
        })
    }

    pub fn to_eps(&self) -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::from_periodic_fn(self.frame.thr, self.frame.per, |n| {
            self.contains(n)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trail_round_trip() {
        let frame = Frame { thr: 3, per: 2 };
        let t = Trail::from_fn(frame, |n| n == 2 || (n > 3 && (n - 4) % 2 == 0));
        assert!(t.contains(2));
        assert!(!t.contains(3));
        assert!(t.contains(4));
        assert!(!t.contains(5));
        assert!(t.contains(6));
        assert!(t.contains(100));
        let eps = t.to_eps();
        for n in 1..=20 {
            assert_eq!(eps.contains(n), t.contains(n), "n = {n}");
        }
        assert!(!t.is_finite());
        assert!(!t.is_cofinite());
    }

    #[test]
    fn finiteness_predicates() {
        let frame = Frame { thr: 2, per: 3 };
        let fin = Trail::from_fn(frame, |n| n <= 2);
        assert!(fin.is_finite());
        assert!(!fin.is_cofinite());
        let cof = Trail::from_fn(frame, |n| n != 1);
        assert!(cof.is_cofinite());
        assert!(!cof.is_finite());
    }

    #[test]
    fn long_frames_span_words(){
        let frame = Frame { thr: 70, per: 9 };
        let t = Trail::from_fn(frame, |n| n % 3 == 0);
        assert!(t.contains(69));
        assert!(t.contains(72));
        assert!(!t.contains(100));
        assert!(t.contains(102));
        assert_eq!(t.to_eps(), EventuallyPeriodicSet::from_progression(0, 3).unwrap());
    }
}
