//! Windowed subsets of ℕ = {1, 2, 3, …} and the generator expressions that build them.
//!
//! An [`IntSet`] is a membership bitmap over a finite [`Window`]. A [`SetExpr`]
//! describes an infinite set through generators and set operations;
//! [`evaluate`] clips it to a window. Evaluation is deterministic, including
//! `bernoulli`, whose membership bit for `x` depends only on `(seed, x)`:
//!
//! ```text
//! h = splitmix64_finalize(seed ^ x.wrapping_mul(0x9E37_79B9_7F4A_7C15))
//! x ∈ A  ⇔  h · 10^scale < num · 2^64        (p = num / 10^scale, exact)
//! ```
//!
//! so the same seed gives the same set on every window and every machine.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Inclusive range `[lo, hi]` with `1 <= lo <= hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Window {
    lo: u64,
    hi: u64,
}

impl Window {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> u64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> u64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> u64 {
        self.hi - self.lo + 1
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParamOutOfRange(format!("window `{s}` is not of the form lo:hi"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        Window::new(lo, hi)
    }
}

/// A finite subset of a window, stored as a bitmap indexed by `x - lo`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntSet {
    window: Window,
    bits: Bits,
}

impl IntSet {
    pub fn empty(window: Window) -> Self {
        IntSet { window, bits: Bits::zeros(window.width() as usize) }
    }

    pub fn full(window: Window) -> Self {
        IntSet { window, bits: Bits::ones(window.width() as usize) }
    }

    /// Builds a set from explicit members; every member must lie in the window.
    pub fn from_members<I: IntoIterator<Item = u64>>(window: Window, members: I) -> Result<Self> {
        let mut s = IntSet::empty(window);
        for x in members {
            if !window.contains(x) {
                return Err(Error::OutsideWindow(format!("member {x} of [{window}]")));
            }
            s.bits.set((x - window.lo) as usize, true);
        }
        Ok(s)
    }

    pub(crate) fn from_bits(window: Window, bits: Bits) -> Self {
        debug_assert_eq!(bits.len() as u64, window.width());
        IntSet { window, bits }
    }

    /// Membership predicate over the window.
    pub fn from_fn(window: Window, f: impl Fn(u64) -> bool) -> Self {
        IntSet { window, bits: (window.lo..=window.hi).map(f).collect() }
    }

    #[inline]
    pub fn window(&self) -> Window {
        self.window
    }

    #[inline]
    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    /// O(1) membership; anything outside the window is a non-member.
    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        self.window.contains(x) && self.bits.get((x - self.window.lo) as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.none()
    }

    /// Members in strictly increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let lo = self.window.lo;
        self.bits.iter_ones().map(move |i| lo + i as u64)
    }

    pub fn min(&self) -> Option<u64> {
        self.bits.first_one().map(|i| self.window.lo + i as u64)
    }

    pub fn complement(&self) -> IntSet {
        IntSet { window: self.window, bits: self.bits.not() }
    }

    pub fn union(&self, other: &IntSet) -> Result<IntSet> {
        self.same_window(other)?;
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Ok(IntSet { window: self.window, bits })
    }

    pub fn intersect(&self, other: &IntSet) -> Result<IntSet> {
        self.same_window(other)?;
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(IntSet { window: self.window, bits })
    }

    /// Subset test on a common window.
    pub fn is_subset_of(&self, other: &IntSet) -> bool {
        self.window == other.window && self.bits.is_subset_of(&other.bits)
    }

    /// The same members seen through another window (clipped, or padded with non-members).
    pub fn rewindow(&self, window: Window) -> IntSet {
        IntSet::from_fn(window, |x| self.contains(x))
    }

    /// The translate `−x + A = { y ≥ 1 : x + y ∈ A }` on the truncated window
    /// `[max(1, lo − x), hi − x]`. Returns `None` when that window is empty
    /// (`x ≥ hi`), which stands for the empty set.
    pub fn shift_set(&self, x: u64) -> Option<IntSet> {
        if x >= self.window.hi {
            return None;
        }
        let w = Window { lo: self.window.lo.saturating_sub(x).max(1), hi: self.window.hi - x };
        // y ∈ result ⇔ bits[y + x - lo]; index of y in w is y - w.lo.
        let offset = (w.lo + x - self.window.lo) as usize;
        Some(IntSet { window: w, bits: self.bits.slice(offset, w.width() as usize) })
    }

    fn same_window(&self, other: &IntSet) -> Result<()> {
        if self.window != other.window {
            return Err(Error::ParamOutOfRange(format!("windows differ: [{}] vs [{}]", self.window, other.window)));
        }
        Ok(())
    }

    /// Set-file text: `window lo hi` then one 0/1 string.
    pub fn to_set_file(&self) -> String {
        let mut s = format!("window {} {}\n", self.window.lo, self.window.hi);
        s.extend((0..self.bits.len()).map(|i| if self.bits.get(i) { '1' } else { '0' }));
        s.push('\n');
        s
    }

    /// Parses either set-file form. A bare integer list gets the window `[1, max]`.
    pub fn parse_set_file(text: &str) -> Result<IntSet> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((first_no, first)) = lines.next() else {
            return Err(Error::Format { line: 1, msg: "empty set file".into() });
        };
        let mut toks = first.split_whitespace();
        if toks.next() == Some("window") {
            let nums: Vec<&str> = toks.collect();
            let window = parse_window_header(&nums, first_no + 1)?;
            let body: String = lines.flat_map(|(_, l)| l.split_whitespace()).collect();
            parse_bitstring(window, &body, first_no + 2)
        } else {
            let mut members = Vec::new();
            for (no, line) in std::iter::once((first_no, first)).chain(lines) {
                for tok in line.split_whitespace() {
                    members.push(parse_positive(tok, no + 1)?);
                }
            }
            let max = members.iter().copied().max().unwrap_or(1);
            IntSet::from_members(Window::new(1, max)?, members)
        }
    }
}

pub(crate) fn parse_positive(tok: &str, line: usize) -> Result<u64> {
    match tok.parse::<u64>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::Format { line, msg: format!("expected a positive integer, found `{tok}`") }),
    }
}

pub(crate) fn parse_window_header(nums: &[&str], line: usize) -> Result<Window> {
    if nums.len() != 2 {
        return Err(Error::Format { line, msg: "expected `window lo hi`".into() });
    }
    let lo = parse_positive(nums[0], line)?;
    let hi = parse_positive(nums[1], line)?;
    Window::new(lo, hi).map_err(|e| Error::Format { line, msg: e.to_string() })
}

pub(crate) fn parse_bitstring(window: Window, body: &str, line: usize) -> Result<IntSet> {
    if body.len() as u64 != window.width() {
        return Err(Error::Format {
            line,
            msg: format!("bit string has length {}, window needs {}", body.len(), window.width()),
        });
    }
    let mut bits = Bits::zeros(body.len());
    for (i, c) in body.bytes().enumerate() {
        match c {
            b'0' => {}
            b'1' => bits.set(i, true),
            _ => return Err(Error::Format { line, msg: format!("unexpected character `{}`", c as char) }),
        }
    }
    Ok(IntSet::from_bits(window, bits))
}

/// A probability in `[0, 1]` held as an exact decimal `num / 10^scale`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prob {
    num: u64,
    scale: u32,
}

impl Prob {
    pub fn value(&self) -> f64 {
        self.num as f64 / 10f64.powi(self.scale as i32)
    }

    fn denom(&self) -> u128 {
        10u128.pow(self.scale)
    }

    /// Exact test `h / 2^64 < p`.
    #[inline]
    fn accepts(&self, h: u64) -> bool {
        (h as u128) * self.denom() < (self.num as u128) << 64
    }
}

impl FromStr for Prob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParamOutOfRange(format!("probability `{s}` must be a decimal in [0, 1]"));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() || !int.bytes().all(|c| c.is_ascii_digit()) || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > 18 {
            return Err(bad());
        }
        let int: u64 = int.parse().map_err(|_| bad())?;
        if int > 1 {
            return Err(bad());
        }
        let scale = frac.len() as u32;
        let f: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int * 10u64.pow(scale) + f;
        if num > 10u64.pow(scale) {
            return Err(bad());
        }
        Ok(Prob { num, scale })
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.num);
        }
        let d = 10u64.pow(self.scale);
        write!(f, "{}.{:0width$}", self.num / d, self.num % d, width = self.scale as usize)
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Membership bit of `x` in `bernoulli(p, seed)`.
#[inline]
pub fn bernoulli_member(p: Prob, seed: u64, x: u64) -> bool {
    p.accepts(splitmix64(seed ^ x.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Set expression over ℕ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SetExpr {
    /// `{a, a+d, a+2d, …}`
    Ap {
        start: u64,
        step: u64,
    },
    /// `[lo, hi]`
    Interval {
        lo: u64,
        hi: u64,
    },
    Multiples(u64),
    /// All nonempty finite sums of the generators.
    IpSet(Vec<u64>),
    /// Union of inclusive blocks.
    Thick(Vec<(u64, u64)>),
    Bernoulli {
        p: Prob,
        seed: u64,
    },
    Union(Vec<SetExpr>),
    Intersect(Vec<SetExpr>),
    /// Window-relative complement.
    Complement(Box<SetExpr>),
    /// Translate to the right: `{x + c : x ∈ A}`.
    Shift(Box<SetExpr>, u64),
}

impl SetExpr {
    /// Checks generator parameters without evaluating.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParamOutOfRange(m));
        match self {
            SetExpr::Ap { start, step } => {
                if *start == 0 {
                    return bad("ap start must be >= 1".into());
                }
                if *step == 0 {
                    return bad("ap step d must be >= 1".into());
                }
            }
            SetExpr::Interval { lo, hi } => {
                if *lo == 0 || lo > hi {
                    return bad(format!("interval({lo},{hi}) needs 1 <= lo <= hi"));
                }
            }
            SetExpr::Multiples(k) => {
                if *k == 0 {
                    return bad("multiples(k) needs k >= 1".into());
                }
            }
            SetExpr::IpSet(gs) => {
                if gs.is_empty() || gs.contains(&0) {
                    return bad("ipset needs at least one generator, all >= 1".into());
                }
            }
            SetExpr::Thick(blocks) => {
                if blocks.is_empty() {
                    return bad("thick needs at least one block".into());
                }
                if let Some((a, b)) = blocks.iter().find(|(a, b)| *a == 0 || a > b) {
                    return bad(format!("thick block {a}:{b} needs 1 <= lo <= hi"));
                }
            }
            SetExpr::Bernoulli { .. } => {}
            SetExpr::Union(xs) | SetExpr::Intersect(xs) => {
                if xs.is_empty() {
                    return bad("union/intersect need at least one operand".into());
                }
                for x in xs {
                    x.validate()?;
                }
            }
            SetExpr::Complement(e) => e.validate()?,
            SetExpr::Shift(e, c) => {
                if *c == 0 {
                    return bad("shift amount must be >= 1".into());
                }
                e.validate()?;
            }
        }
        Ok(())
    }
}

/// Evaluates `expr` clipped to `window`.
pub fn evaluate(expr: &SetExpr, window: Window) -> Result<IntSet> {
    expr.validate()?;
    Ok(eval_unchecked(expr, window))
}

fn eval_unchecked(expr: &SetExpr, w: Window) -> IntSet {
    match expr {
        SetExpr::Ap { start, step } => {
            let mut s = IntSet::empty(w);
            let mut x = if *start >= w.lo { *start } else { start + (w.lo - start).div_ceil(*step) * step };
            while x <= w.hi {
                s.bits.set((x - w.lo) as usize, true);
                x += step;
            }
            s
        }
        SetExpr::Interval { lo, hi } => IntSet::from_fn(w, |x| *lo <= x && x <= *hi),
        SetExpr::Multiples(k) => eval_unchecked(&SetExpr::Ap { start: *k, step: *k }, w),
        SetExpr::IpSet(gs) => ip_set_unchecked(gs, w),
        SetExpr::Thick(blocks) => IntSet::from_fn(w, |x| blocks.iter().any(|&(a, b)| a <= x && x <= b)),
        SetExpr::Bernoulli { p, seed } => IntSet::from_fn(w, |x| bernoulli_member(*p, *seed, x)),
        SetExpr::Union(xs) => {
            let mut acc = IntSet::empty(w);
            for x in xs {
                acc.bits.or_assign(&eval_unchecked(x, w).bits);
            }
            acc
        }
        SetExpr::Intersect(xs) => {
            let mut acc = IntSet::full(w);
            for x in xs {
                acc.bits.and_assign(&eval_unchecked(x, w).bits);
            }
            acc
        }
        SetExpr::Complement(e) => eval_unchecked(e, w).complement(),
        SetExpr::Shift(e, c) => {
            if w.hi <= *c {
                return IntSet::empty(w);
            }
            let inner_w = Window { lo: w.lo.saturating_sub(*c).max(1), hi: w.hi - c };
            let inner = eval_unchecked(e, inner_w);
            IntSet::from_fn(w, |x| x > *c && inner.contains(x - c))
        }
    }
}

/// All nonempty finite sums `Σ_{i∈T} g_i` clipped to the window.
pub fn ip_set(generators: &[u64], window: Window) -> Result<IntSet> {
    SetExpr::IpSet(generators.to_vec()).validate()?;
    Ok(ip_set_unchecked(generators, window))
}

fn ip_set_unchecked(generators: &[u64], w: Window) -> IntSet {
    // reach[v] for v in [0, hi]; bit 0 is the empty sum.
    let n = w.hi as usize + 1;
    let mut reach = Bits::zeros(n);
    reach.set(0, true);
    for &g in generators {
        if (g as usize) < n {
            let moved = reach.shifted_up(g as usize);
            reach.or_assign(&moved);
        }
    }
    IntSet::from_bits(w, reach.slice(w.lo as usize, w.width() as usize))
}
