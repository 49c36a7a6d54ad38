use std::fmt;

use crate::ordinal::Ordinal;

/// The ranks `{r + shift : lo <= r <= hi}` (or `r < hi` when `hi_open`).
///
/// Always normalized: an open upper bound is a limit ordinal, and the set is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankSet {
    lo: Ordinal,
    hi: Ordinal,
    hi_open: bool,
    shift: u64,
}

impl RankSet {
    pub fn single(r: Ordinal) -> RankSet {
        RankSet { lo: r.clone(), hi: r, hi_open: false, shift: 0 }
    }

    /// `[lo, hi]`; `None` when empty.
    pub fn closed(lo: Ordinal, hi: Ordinal) -> Option<RankSet> {
        (lo <= hi).then_some(RankSet { lo, hi, hi_open: false, shift: 0 })
    }

    /// `[lo, hi[`; `None` when empty.
    pub fn below(lo: Ordinal, hi: Ordinal) -> Option<RankSet> {
        RankSet { lo, hi, hi_open: true, shift: 0 }.normalized()
    }

    fn normalized(mut self) -> Option<RankSet> {
        if self.hi_open {
            if let Some(p) = self.hi.pred() {
                self.hi = p;
                self.hi_open = false;
            } else if self.hi.is_zero() {
                return None;
            }
        }
        if self.lo > self.hi || (self.hi_open && self.lo >= self.hi) {
            return None;
        }
        Some(self)
    }

    pub fn min(&self) -> Ordinal {
        self.lo.add(&Ordinal::nat(self.shift))
    }

    /// The largest rank, when attained.
    pub fn max(&self) -> Option<Ordinal> {
        (!self.hi_open).then(|| self.hi.add(&Ordinal::nat(self.shift)))
    }

    /// The least ordinal above every rank: the first stage in which the set is gone.
    pub fn height(&self) -> Ordinal {
        match self.max() {
            Some(m) => m.succ(),
            None => self.hi.clone(),
        }
    }

    pub fn is_single(&self) -> bool {
        !self.hi_open && self.lo == self.hi
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        let Some(r) = x.sub_nat(self.shift) else {
            return false;
        };
        self.lo <= r && if self.hi_open { r < self.hi } else { r <= self.hi }
    }

    pub fn shifted(&self, n: u64) -> RankSet {
        RankSet { shift: self.shift + n, ..self.clone() }
    }

    /// Undo a shift of at most the current one.
    pub fn unshifted(&self, n: u64) -> RankSet {
        assert!(n <= self.shift, "cannot unshift below zero");
        RankSet { shift: self.shift - n, ..self.clone() }
    }

    /// True when some rank is `>= g`.
    pub fn reaches(&self, g: &Ordinal) -> bool {
        self.height() > *g
    }

    /// The ranks in `[a, b[` (`b = None` for no upper bound).
    pub fn restrict(&self, a: &Ordinal, b: Option<&Ordinal>) -> Option<RankSet> {
        let mut out = self.clone();
        let a = a.unshift(self.shift);
        if a > out.lo {
            out.lo = a;
        }
        if let Some(b) = b {
            let b = b.unshift(self.shift);
            if b < out.hi || (b == out.hi && !out.hi_open) {
                out.hi = b;
                out.hi_open = true;
            }
        }
        out.normalized()
    }

    /// Drop the largest rank (used when the only top point of a class is removed).
    pub fn without_max(&self) -> Option<RankSet> {
        if self.hi_open {
            return Some(self.clone());
        }
        RankSet { hi_open: true, ..self.clone() }.normalized()
    }

    /// All elements, when there are at most `limit` of them.
    pub fn elements(&self, limit: usize) -> Option<Vec<Ordinal>> {
        if self.hi_open {
            return None;
        }
        let n = self.lo.sub_left(&self.hi)?.as_nat()?;
        if n >= limit as u64 {
            return None;
        }
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut r = self.lo.add(&Ordinal::nat(self.shift));
        for _ in 0..=n {
            out.push(r.clone());
            r = r.succ();
        }
        Some(out)
    }

    /// The finite ranks, or `None` when there are infinitely many.
    pub fn finite_elements(&self) -> Option<Vec<u64>> {
        let omega = Ordinal::omega();
        match self.restrict(&Ordinal::zero(), Some(&omega)) {
            None => Some(Vec::new()),
            Some(f) => {
                if f.hi_open {
                    return None;
                }
                let (lo, hi) = (f.lo.as_nat()?, f.hi.as_nat()?);
                Some((lo..=hi).map(|r| r + f.shift).collect())
            }
        }
    }

    /// True when every element is a successor ordinal.
    pub fn all_successors(&self) -> bool {
        self.shift > 0 || (self.is_single() && self.lo.is_successor())
    }

    pub fn lo_unshifted(&self) -> &Ordinal {
        &self.lo
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            return write!(f, "{{{}}}", self.min());
        }
        let close = if self.hi_open { "[" } else { "]" };
        write!(f, "[{}, {}{}", self.lo, self.hi, close)?;
        if self.shift > 0 {
            write!(f, "+{}", self.shift)?;
        }
        Ok(())
    }
}

impl serde::Serialize for RankSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn open_successor_bounds_close() {
        let r = RankSet::below(o("0"), o("3")).unwrap();
        assert_eq!(r.max(), Some(o("2")));
        assert!(RankSet::below(o("2"), o("2")).is_none());
        let l = RankSet::below(o("0"), o("w")).unwrap();
        assert_eq!(l.max(), None);
        assert_eq!(l.height(), o("w"));
        assert_eq!(l.finite_elements(), None);
    }

    #[test]
    fn shifted_membership() {
        let r = RankSet::below(o("0"), o("w")).unwrap().shifted(1);
        assert!(r.contains(&o("1")));
        assert!(r.contains(&o("7")));
        assert!(!r.contains(&o("0")));
        assert!(!r.contains(&o("w")));
        let t = RankSet::closed(o("w"), o("w*2")).unwrap().shifted(2);
        assert!(t.contains(&o("w+2")));
        assert!(!t.contains(&o("w+1")));
        assert_eq!(t.max(), Some(o("w*2+2")));
        assert_eq!(t.restrict(&o("w+5"), None).unwrap().min(), o("w+5"));
        assert_eq!(t.restrict(&o("w+1"), None).unwrap().min(), o("w+2"));
    }

    #[test]
    fn element_listing() {
        let r = RankSet::closed(o("w"), o("w+3")).unwrap();
        assert_eq!(r.elements(10).unwrap().len(), 4);
        assert!(RankSet::closed(o("0"), o("w")).unwrap().elements(100).is_none());
        assert_eq!(RankSet::closed(o("2"), o("w")).unwrap().finite_elements(), None);
        assert_eq!(RankSet::closed(o("2"), o("4")).unwrap().shifted(1).finite_elements(), Some(vec![3, 4, 5]));
    }
}
