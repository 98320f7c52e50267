//! Arithmetic-progression search and the lift
//! `A ↦ {(a, d) : a, a+d, …, a+ld ∈ A} ⊆ ℕ × ℕ`, with 2D block-syndetic detectors.
//!
//! Both [`ap_search`] and [`lift`] work one common difference `d` at a time:
//! intersecting the membership bitmap with its own shifts by `d, 2d, …, ld`
//! leaves exactly the starts `a` of progressions with that difference.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::par;
use crate::sets::{IntSet, Window};

/// `a, a+d, …, a+l·d` (so `l + 1` terms).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ApWitness {
    pub a: u64,
    pub d: u64,
    pub l: u64,
}

impl ApWitness {
    pub fn terms(&self) -> impl Iterator<Item = Option<u64>> + '_ {
        (0..=self.l).map(|i| i.checked_mul(self.d).and_then(|x| x.checked_add(self.a)))
    }
}

/// Certificate check: every term lies in `set`. Degenerate steps `d = 0` never verify.
pub fn verify_ap(set: &IntSet, w: &ApWitness) -> bool {
    w.a >= 1 && w.d >= 1 && w.terms().all(|t| t.is_some_and(|x| set.contains(x)))
}

/// Starts of `(l+1)`-term progressions with step `d`, indexed like `set`'s bitmap.
fn starts_with_step(set: &IntSet, l: u64, d: u64) -> Bits {
    let bits = set.bits();
    let mut m = bits.clone();
    for i in 1..=l {
        let Some(shift) = i.checked_mul(d).filter(|&s| s < bits.len() as u64) else {
            return Bits::zeros(bits.len());
        };
        m.and_shifted_down(bits, shift as usize);
    }
    m
}

/// Least `(d, a)` in lexicographic order with `a, …, a+ld ∈ set`.
pub fn ap_search(set: &IntSet, l: u64) -> Result<Option<ApWitness>> {
    if l == 0 {
        return Err(Error::ParamOutOfRange("progression length l must be >= 1".into()));
    }
    let w = set.window();
    let d_max = (w.width() - 1) / l;
    Ok(par::find_first(0..d_max as usize, |i| {
        let d = i as u64 + 1;
        starts_with_step(set, l, d).first_one().map(|idx| ApWitness { a: w.lo() + idx as u64, d, l })
    }))
}

/// `[lo1, hi1] × [lo2, hi2]`: first coordinate `a`, second `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Box2D {
    pub a_lo: u64,
    pub a_hi: u64,
    pub d_lo: u64,
    pub d_hi: u64,
}

impl Box2D {
    pub fn new(a_lo: u64, a_hi: u64, d_lo: u64, d_hi: u64) -> Result<Self> {
        if a_lo == 0 || d_lo == 0 || a_lo > a_hi || d_lo > d_hi {
            return Err(Error::ParamOutOfRange(format!(
                "box [{a_lo},{a_hi}]x[{d_lo},{d_hi}] needs nonempty ranges starting at >= 1"
            )));
        }
        Ok(Box2D { a_lo, a_hi, d_lo, d_hi })
    }

    pub fn a_width(&self) -> u64 {
        self.a_hi - self.a_lo + 1
    }

    pub fn d_width(&self) -> u64 {
        self.d_hi - self.d_lo + 1
    }

    pub fn contains(&self, a: u64, d: u64) -> bool {
        (self.a_lo..=self.a_hi).contains(&a) && (self.d_lo..=self.d_hi).contains(&d)
    }

    pub fn contains_box(&self, other: &Box2D) -> bool {
        self.a_lo <= other.a_lo && other.a_hi <= self.a_hi && self.d_lo <= other.d_lo && other.d_hi <= self.d_hi
    }

    /// The box `[lo, lo+⌊w/2⌋−1] × [1, ⌊(w−⌊w/2⌋)/l⌋]` of a width-`w` window,
    /// on which no `(l+1)`-term progression leaves the window.
    pub fn induced(window: Window, l: u64) -> Result<Box2D> {
        let half = window.width() / 2;
        let d_hi = (window.width() - half).checked_div(l).unwrap_or(0);
        if half == 0 || d_hi == 0 {
            return Err(Error::ParamOutOfRange(format!("window [{window}] too narrow for l = {l}")));
        }
        Box2D::new(window.lo(), window.lo() + half - 1, 1, d_hi)
    }

    /// Parses `lo1:hi1,lo2:hi2`.
    pub fn parse(s: &str) -> Result<Box2D> {
        let bad = || Error::ParamOutOfRange(format!("box `{s}` is not of the form lo1:hi1,lo2:hi2"));
        let (a, d) = s.split_once(',').ok_or_else(bad)?;
        let range = |r: &str| -> Result<(u64, u64)> {
            let (x, y) = r.split_once(':').ok_or_else(bad)?;
            Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        };
        let (a_lo, a_hi) = range(a)?;
        let (d_lo, d_hi) = range(d)?;
        Box2D::new(a_lo, a_hi, d_lo, d_hi)
    }
}

impl std::fmt::Display for Box2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{}:{}", self.a_lo, self.a_hi, self.d_lo, self.d_hi)
    }
}

/// Subset of a [`Box2D`]; one bitmap row per `d`, columns indexed by `a`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Set2D {
    bounds: Box2D,
    rows: Vec<Bits>,
}

impl Set2D {
    pub fn empty(bounds: Box2D) -> Self {
        Set2D { bounds, rows: vec![Bits::zeros(bounds.a_width() as usize); bounds.d_width() as usize] }
    }

    pub fn from_fn(bounds: Box2D, f: impl Fn(u64, u64) -> bool) -> Self {
        let rows =
            (bounds.d_lo..=bounds.d_hi).map(|d| (bounds.a_lo..=bounds.a_hi).map(|a| f(a, d)).collect()).collect();
        Set2D { bounds, rows }
    }

    pub fn bounds(&self) -> Box2D {
        self.bounds
    }

    pub fn contains(&self, a: u64, d: u64) -> bool {
        self.bounds.contains(a, d) && self.rows[(d - self.bounds.d_lo) as usize].get((a - self.bounds.a_lo) as usize)
    }

    /// Adds a cell; cells outside the box are rejected.
    pub fn insert(&mut self, a: u64, d: u64) -> Result<()> {
        if !self.bounds.contains(a, d) {
            return Err(Error::OutsideWindow(format!("cell ({a},{d}) of box {}", self.bounds)));
        }
        self.rows[(d - self.bounds.d_lo) as usize].set((a - self.bounds.a_lo) as usize, true);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Bits::count_ones).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(Bits::none)
    }

    /// Cells `(a, d)` ordered by `d`, then `a`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let b = self.bounds;
        self.rows
            .iter()
            .enumerate()
            .flat_map(move |(j, row)| row.iter_ones().map(move |i| (b.a_lo + i as u64, b.d_lo + j as u64)))
    }

    pub fn is_subset_of(&self, other: &Set2D) -> bool {
        self.bounds == other.bounds && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset_of(b))
    }

    /// `box lo1 hi1 lo2 hi2`, then one 0/1 row per `d`.
    pub fn to_file(&self) -> String {
        let b = self.bounds;
        let mut s = format!("box {} {} {} {}\n", b.a_lo, b.a_hi, b.d_lo, b.d_hi);
        for row in &self.rows {
            s.extend((0..row.len()).map(|i| if row.get(i) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn parse_file(text: &str) -> Result<Set2D> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let fmt = |line: usize, msg: String| Error::Format { line, msg };
        let (no, header) = lines.next().ok_or_else(|| fmt(1, "empty Set2D file".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "box" {
            return Err(fmt(no + 1, "expected `box lo1 hi1 lo2 hi2`".into()));
        }
        let nums = toks[1..].iter().map(|t| crate::sets::parse_positive(t, no + 1)).collect::<Result<Vec<u64>>>()?;
        let bounds = Box2D::new(nums[0], nums[1], nums[2], nums[3]).map_err(|e| fmt(no + 1, e.to_string()))?;
        let mut set = Set2D::empty(bounds);
        let mut count = 0;
        for (no, line) in lines {
            let line = line.trim();
            if count == set.rows.len() {
                return Err(fmt(no + 1, "more rows than the box height".into()));
            }
            if line.len() as u64 != bounds.a_width() {
                return Err(fmt(no + 1, format!("row has length {}, box needs {}", line.len(), bounds.a_width())));
            }
            for (i, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => set.rows[count].set(i, true),
                    _ => return Err(fmt(no + 1, format!("unexpected character `{}`", c as char))),
                }
            }
            count += 1;
        }
        if count != set.rows.len() {
            return Err(fmt(no + 1, format!("expected {} rows, found {count}", set.rows.len())));
        }
        Ok(set)
    }
}

/// `{(a, d) ∈ box : a + i·d ∈ set for i = 0..=l}`; pairs whose last term passes
/// the window's upper end are left out.
pub fn lift(set: &IntSet, l: u64, bounds: Box2D) -> Set2D {
    let w = set.window();
    let offset = bounds.a_lo as i64 - w.lo() as i64;
    let width = bounds.a_width() as usize;
    let rows = par::map_collect(0..bounds.d_width() as usize, |j| {
        let d = bounds.d_lo + j as u64;
        starts_with_step(set, l, d).window_slice(offset, width)
    });
    Set2D { bounds, rows }
}

/// Cells of `bounds` excluded from the lift only because `a + l·d` passes `window.hi`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Clipping {
    pub window_hi: u64,
    pub clipped_cells: u64,
}

pub fn clipping(window: Window, l: u64, bounds: Box2D) -> Clipping {
    let hi = window.hi() as u128;
    let clipped = (bounds.d_lo..=bounds.d_hi)
        .map(|d| {
            // a > hi - l·d
            let first_bad = (hi + 1).saturating_sub(l as u128 * d as u128).max(bounds.a_lo as u128);
            (bounds.a_hi as u128 + 1).saturating_sub(first_bad) as u64
        })
        .sum();
    Clipping { window_hi: window.hi(), clipped_cells: clipped }
}

/// 2D summed-area table over a sub-box.
struct Prefix2D {
    origin: (u64, u64),
    stride: usize,
    sums: Vec<u32>,
}

impl Prefix2D {
    fn of(set: &Set2D, sub: Box2D) -> Self {
        let (wa, wd) = (sub.a_width() as usize, sub.d_width() as usize);
        let stride = wa + 1;
        let mut sums = vec![0u32; stride * (wd + 1)];
        for j in 0..wd {
            let mut run = 0;
            for i in 0..wa {
                run += set.contains(sub.a_lo + i as u64, sub.d_lo + j as u64) as u32;
                sums[(j + 1) * stride + i + 1] = sums[j * stride + i + 1] + run;
            }
        }
        Prefix2D { origin: (sub.a_lo, sub.d_lo), stride, sums }
    }

    /// Number of cells in `[a, a+ra) × [d, d+rd)`.
    fn count(&self, a: u64, d: u64, ra: u64, rd: u64) -> u32 {
        let (i0, j0) = ((a - self.origin.0) as usize, (d - self.origin.1) as usize);
        let (i1, j1) = (i0 + ra as usize, j0 + rd as usize);
        let s = &self.sums;
        let st = self.stride;
        s[j1 * st + i1] + s[j0 * st + i0] - s[j0 * st + i1] - s[j1 * st + i0]
    }
}

/// True iff every `r1 × r2` block (`r1` along `a`, `r2` along `d`) inside `sub` meets `set`.
pub fn is_syndetic_2d(set: &Set2D, sub: Box2D, r1: u64, r2: u64) -> Result<bool> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::ParamOutOfRange("block sizes must be >= 1".into()));
    }
    if !set.bounds.contains_box(&sub) {
        return Err(Error::OutsideWindow(format!("sub-box {sub} of box {}", set.bounds)));
    }
    if r1 > sub.a_width() || r2 > sub.d_width() {
        return Ok(true);
    }
    let pre = Prefix2D::of(set, sub);
    let rows = (sub.d_width() - r2 + 1) as usize;
    Ok(par::all(0..rows, |j| {
        let d = sub.d_lo + j as u64;
        (sub.a_lo..=sub.a_hi + 1 - r1).all(|a| pre.count(a, d, r1, r2) > 0)
    }))
}

/// Sub-box of size `l1 × l2` on which the lift is `(r1, r2)`-block syndetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Pws2dWitness {
    pub r1: u64,
    pub r2: u64,
    pub sub: Box2D,
}

impl Pws2dWitness {
    pub fn verify(&self, set: &Set2D) -> bool {
        self.r1 >= 1 && self.r2 >= 1 && is_syndetic_2d(set, self.sub, self.r1, self.r2).unwrap_or(false)
    }
}

/// First `l1 × l2` sub-box (ordered by `d`-start, then `a`-start) that is `(r1, r2)`-block syndetic.
pub fn find_pws_witness_2d(set: &Set2D, r1: u64, r2: u64, l1: u64, l2: u64) -> Result<Option<Pws2dWitness>> {
    let b = set.bounds;
    if r1 == 0 || r2 == 0 || l1 == 0 || l2 == 0 || l1 > b.a_width() || l2 > b.d_width() {
        return Err(Error::ParamOutOfRange(format!(
            "need r1, r2 >= 1 and a {l1}x{l2} sub-box inside {}x{}",
            b.a_width(),
            b.d_width()
        )));
    }
    let at =
        |a: u64, d: u64| Pws2dWitness { r1, r2, sub: Box2D { a_lo: a, a_hi: a + l1 - 1, d_lo: d, d_hi: d + l2 - 1 } };
    if r1 > l1 || r2 > l2 {
        return Ok(Some(at(b.a_lo, b.d_lo)));
    }
    // Empty-block indicator over block origins, then its summed-area table.
    let pre = Prefix2D::of(set, b);
    let (na, nd) = (b.a_width() - r1 + 1, b.d_width() - r2 + 1);
    let empty_origin = Box2D { a_lo: b.a_lo, a_hi: b.a_lo + na - 1, d_lo: b.d_lo, d_hi: b.d_lo + nd - 1 };
    let empty = Set2D::from_fn(empty_origin, |a, d| pre.count(a, d, r1, r2) == 0);
    let bad = Prefix2D::of(&empty, empty_origin);
    let (span_a, span_d) = (l1 - r1 + 1, l2 - r2 + 1);
    Ok(par::find_first(0..(b.d_width() - l2 + 1) as usize, |j| {
        let d = b.d_lo + j as u64;
        (b.a_lo..=b.a_hi + 1 - l1).find(|&a| bad.count(a, d, span_a, span_d) == 0).map(|a| at(a, d))
    }))
}
