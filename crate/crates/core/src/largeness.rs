//! Finitary syndetic / thick / piecewise-syndetic detectors and the
//! van der Waerden coloring check.
//!
//! A set is `r`-syndetic on an interval `I` when every length-`r` block that
//! fits inside `I` meets the set. A piecewise-syndetic witness is a length-`L`
//! interval on which the set is `r`-syndetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::sets::{IntSet, Window};

/// Interval of length `len` starting at `start` on which the set is `r`-syndetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PwsWitness {
    pub r: u64,
    pub start: u64,
    pub len: u64,
}

impl PwsWitness {
    pub fn interval(&self) -> Result<Window> {
        if self.len == 0 {
            return Err(Error::MalformedWitness("interval length 0".into()));
        }
        Window::new(self.start, self.start + self.len - 1)
    }

    /// Re-checks the witness against `set`.
    pub fn verify(&self, set: &IntSet) -> bool {
        match self.interval() {
            Ok(i) => self.r >= 1 && is_syndetic_on(set, i, self.r).unwrap_or(false),
            Err(_) => false,
        }
    }
}

/// Gap bookkeeping of `A ∩ I`.
///
/// `leading`/`trailing` count non-members before the first / after the last
/// member; `internal` holds the sorted differences between consecutive
/// members. With no members, `leading = |I|` and `trailing = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapProfile {
    pub leading: u64,
    pub trailing: u64,
    pub internal: Vec<u64>,
    pub members: u64,
}

impl GapProfile {
    /// Length of the longest run of non-members inside the interval.
    pub fn longest_miss(&self) -> u64 {
        let inner = self.internal.last().map_or(0, |g| g - 1);
        self.leading.max(self.trailing).max(inner)
    }

    /// `|A ∩ I| + Σ (gap − 1) + leading + trailing`, which equals `|I|`.
    pub fn accounted_len(&self) -> u64 {
        self.members + self.internal.iter().map(|g| g - 1).sum::<u64>() + self.leading + self.trailing
    }
}

fn check_inside(set: &IntSet, interval: Window) -> Result<()> {
    if !set.window().contains_window(&interval) {
        return Err(Error::OutsideWindow(format!("interval [{interval}] of [{}]", set.window())));
    }
    Ok(())
}

/// Members of `set` inside `interval`, in increasing order.
fn members_in(set: &IntSet, interval: Window) -> impl Iterator<Item = u64> + '_ {
    let lo = set.window().lo();
    let bits = set.bits();
    let end = (interval.hi() - lo) as usize;
    let mut next = (interval.lo() - lo) as usize;
    std::iter::from_fn(move || {
        let i = bits.next_one(next).filter(|&i| i <= end)?;
        next = i + 1;
        Some(lo + i as u64)
    })
}

pub fn gap_profile(set: &IntSet, interval: Window) -> Result<GapProfile> {
    check_inside(set, interval)?;
    let mut it = members_in(set, interval);
    let Some(first) = it.next() else {
        return Ok(GapProfile { leading: interval.width(), trailing: 0, internal: vec![], members: 0 });
    };
    let mut internal = Vec::new();
    let mut prev = first;
    let mut members = 1;
    for x in it {
        internal.push(x - prev);
        prev = x;
        members += 1;
    }
    internal.sort_unstable();
    Ok(GapProfile { leading: first - interval.lo(), trailing: interval.hi() - prev, internal, members })
}

/// Longest run of non-members of `set` inside `interval` (no sorting, no allocation).
fn longest_miss(set: &IntSet, interval: Window) -> u64 {
    let mut prev = interval.lo() - 1;
    let mut best = 0;
    for x in members_in(set, interval) {
        best = best.max(x - prev - 1);
        prev = x;
    }
    best.max(interval.hi() - prev)
}

/// True iff every length-`r` block inside `interval` meets `set`.
pub fn is_syndetic_on(set: &IntSet, interval: Window, r: u64) -> Result<bool> {
    if r == 0 {
        return Err(Error::ParamOutOfRange("gap bound r must be >= 1".into()));
    }
    check_inside(set, interval)?;
    Ok(longest_miss(set, interval) < r)
}

/// True iff `set` contains some interval of length `len`.
pub fn is_thick_on(set: &IntSet, len: u64) -> Result<bool> {
    if len == 0 || len > set.window().width() {
        return Err(Error::ParamOutOfRange(format!(
            "thickness length {len} must lie in [1, {}]",
            set.window().width()
        )));
    }
    Ok(longest_run(set) >= len)
}

/// Length of the longest run of consecutive members.
pub fn longest_run(set: &IntSet) -> u64 {
    let mut best = 0;
    let mut run = 0;
    let mut last = None;
    for x in set.iter() {
        run = if last == Some(x - 1) { run + 1 } else { 1 };
        best = best.max(run);
        last = Some(x);
    }
    best
}

/// Smallest-start interval of length `len` on which `set` is `r`-syndetic.
pub fn find_pws_witness(set: &IntSet, r: u64, len: u64) -> Result<Option<PwsWitness>> {
    let w = set.window();
    if r == 0 || len == 0 || len > w.width() {
        return Err(Error::ParamOutOfRange(format!("need r >= 1 and 1 <= L <= {} (got r={r}, L={len})", w.width())));
    }
    if r > len {
        return Ok(Some(PwsWitness { r, start: w.lo(), len }));
    }
    // Block starts x with [x, x+r-1] empty form one interval per long miss run.
    // Interval starting at s is good iff no bad start lies in [s, s+len-r].
    let mut s = w.lo();
    let mut prev = w.lo() - 1;
    let runs = members_in(set, w).map(Some).chain(std::iter::once(None)).filter_map(|m| {
        let end = m.unwrap_or(w.hi() + 1);
        let run = (prev + 1, end - 1);
        prev = end;
        (end - run.0 >= r).then_some(run)
    });
    for (u, v) in runs {
        let (bad_lo, bad_hi) = (u, v + 1 - r);
        if bad_lo > s + len - r {
            break;
        }
        if bad_hi >= s {
            s = bad_hi + 1;
        }
    }
    Ok((s + len - 1 <= w.hi()).then_some(PwsWitness { r, start: s, len }))
}

/// Least `r` for which a length-`len` witness exists; `None` if even `r = len` fails.
pub fn min_r_for_len(set: &IntSet, len: u64) -> Result<Option<u64>> {
    if find_pws_witness(set, len, len)?.is_none() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1, len);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if find_pws_witness(set, mid, len)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// How [`vdw_check`] searched.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VdwStrategy {
    Exhaustive,
    Backtracking,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VdwVerdict {
    /// Every coloring has a monochromatic progression.
    Holds,
    /// Lexicographically least coloring (colors `0..c`, position 1 first) with none.
    Fails(Vec<u8>),
    /// Budget ran out before a decision.
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VdwOutcome {
    pub verdict: VdwVerdict,
    pub strategy: VdwStrategy,
    /// Colorings enumerated or search nodes visited.
    pub work: u64,
}

/// Colorings count above which the check switches to backtracking.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

/// Default cap on colorings / search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 32;

/// Does every `colors`-coloring of `[1, n]` contain a monochromatic `ap_len`-term progression?
pub fn vdw_check(n: u64, colors: u64, ap_len: u64, budget: u64) -> Result<VdwOutcome> {
    let exhaustive = colors.checked_pow(n.min(64) as u32).is_some_and(|c| c <= EXHAUSTIVE_LIMIT);
    let strategy = if exhaustive { VdwStrategy::Exhaustive } else { VdwStrategy::Backtracking };
    vdw_check_with(n, colors, ap_len, budget, strategy)
}

/// [`vdw_check`] with a forced strategy. Both strategies return the same verdict.
pub fn vdw_check_with(n: u64, colors: u64, ap_len: u64, budget: u64, strategy: VdwStrategy) -> Result<VdwOutcome> {
    if n == 0 || colors == 0 || ap_len == 0 {
        return Err(Error::ParamOutOfRange("n, colors and ap_len must all be >= 1".into()));
    }
    if colors > u8::MAX as u64 + 1 || n > u32::MAX as u64 {
        return Err(Error::ParamOutOfRange("at most 256 colors and 2^32 positions".into()));
    }
    let (n, c, k) = (n as usize, colors as u8, ap_len as usize);
    match strategy {
        VdwStrategy::Exhaustive => {
            let total = match colors.checked_pow(n as u32) {
                Some(t) if t <= budget && t <= usize::MAX as u64 => t,
                _ => return Ok(VdwOutcome { verdict: VdwVerdict::Unknown, strategy, work: 0 }),
            };
            let hit = par::find_first(0..total as usize, |idx| {
                let coloring = decode_coloring(idx as u64, n, colors);
                is_ap_free(&coloring, k).then_some(coloring)
            });
            let verdict = hit.map_or(VdwVerdict::Holds, VdwVerdict::Fails);
            Ok(VdwOutcome { verdict, strategy, work: total })
        }
        VdwStrategy::Backtracking => {
            let mut search = Backtrack { n, colors: c, k, coloring: Vec::with_capacity(n), nodes: 0, budget };
            let verdict = match search.run(0) {
                Some(true) => VdwVerdict::Fails(search.coloring.clone()),
                Some(false) => VdwVerdict::Holds,
                None => VdwVerdict::Unknown,
            };
            Ok(VdwOutcome { verdict, strategy, work: search.nodes })
        }
    }
}

/// Base-`colors` digits of `idx`, most significant digit at position 1.
fn decode_coloring(mut idx: u64, n: usize, colors: u64) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % colors) as u8;
        idx /= colors;
    }
    out
}

/// True iff no `k`-term progression with step `d >= 1` is monochromatic.
pub fn is_ap_free(coloring: &[u8], k: usize) -> bool {
    let n = coloring.len();
    if k <= 1 {
        return n == 0;
    }
    (0..n)
        .all(|a| (1..n).take_while(|d| a + (k - 1) * d < n).all(|d| (1..k).any(|i| coloring[a + i * d] != coloring[a])))
}

struct Backtrack {
    n: usize,
    colors: u8,
    k: usize,
    coloring: Vec<u8>,
    nodes: u64,
    budget: u64,
}

impl Backtrack {
    /// `Some(true)`: AP-free completion found; `Some(false)`: none; `None`: budget exhausted.
    fn run(&mut self, max_used: u16) -> Option<bool> {
        let p = self.coloring.len();
        if p == self.n {
            return Some(true);
        }
        // Restricted growth: the least coloring in each relabeling class.
        let limit = if p == 0 { 1 } else { (max_used + 2).min(self.colors as u16) };
        for col in 0..limit as u8 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.coloring.push(col);
            if !self.closes_ap() {
                match self.run(max_used.max(col as u16)) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.coloring.pop();
        }
        Some(false)
    }

    /// Does the last position complete a monochromatic progression?
    fn closes_ap(&self) -> bool {
        let p = self.coloring.len() - 1;
        let col = self.coloring[p];
        if self.k <= 1 {
            return true;
        }
        (1..=p / (self.k - 1)).any(|d| (1..self.k).all(|i| self.coloring[p - i * d] == col))
    }
}
