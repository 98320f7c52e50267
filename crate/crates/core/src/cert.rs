//! Machine-checkable certificates.
//!
//! A certificate is UTF-8 JSON with sorted keys:
//!
//! ```text
//! schema        "aplift.certificate/1"
//! kind          ap | pws | pws2d | jset | jset2d | chain | vdw
//! tool_version
//! input         the data the claim is about (set / family / chain files, or vdw sizes)
//! input_digest  sha256 of the canonical JSON of `input`
//! params        search parameters (window, box, r, L, l, b, a_max, x_max, …)
//! witness       the claim's finite evidence
//! truncation    notes on how finite windows cut the claim
//! timestamp     optional, outside every digest
//! body_digest   sha256 of the canonical JSON of everything except itself and `timestamp`
//! ```
//!
//! Verification recomputes membership from `input` and `witness` only. The one
//! exception is a vdw "holds" verdict, which has no finite witness and is
//! re-checked by an independent enumeration.

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::jset::{verify_jwitness, verify_jwitness2d, FuncFamily, FuncFamily2D, JWitness, JWitness2D};
use crate::largeness::{is_ap_free, PwsWitness, VdwOutcome, VdwStrategy, VdwVerdict, DEFAULT_BUDGET};
use crate::lift::{clipping, lift, verify_ap, ApWitness, Box2D, Clipping, Pws2dWitness};
use crate::sets::{IntSet, Window};
use crate::towers::{Chain, ChainReport, LevelEvidence};

pub const SCHEMA: &str = "aplift.certificate/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CertKind {
    Ap,
    Pws,
    Pws2d,
    Jset,
    Jset2d,
    Chain,
    Vdw,
}

impl CertKind {
    pub const ALL: [CertKind; 7] = [
        CertKind::Ap,
        CertKind::Pws,
        CertKind::Pws2d,
        CertKind::Jset,
        CertKind::Jset2d,
        CertKind::Chain,
        CertKind::Vdw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::Ap => "ap",
            CertKind::Pws => "pws",
            CertKind::Pws2d => "pws2d",
            CertKind::Jset => "jset",
            CertKind::Jset2d => "jset2d",
            CertKind::Chain => "chain",
            CertKind::Vdw => "vdw",
        }
    }
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CertKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CertKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema: String,
    pub kind: String,
    pub tool_version: String,
    pub input: Value,
    pub input_digest: String,
    pub params: Value,
    pub witness: Value,
    pub truncation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub body_digest: String,
}

/// sha256 (hex) of the compact JSON of `v`; object keys are already sorted.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(serde_json::to_string(v).expect("JSON values always serialize").as_bytes()))
}

impl Certificate {
    fn seal(kind: CertKind, input: Value, params: Value, witness: Value, truncation: Vec<String>) -> Certificate {
        let mut c = Certificate {
            schema: SCHEMA.to_string(),
            kind: kind.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            input_digest: digest(&input),
            input,
            params,
            witness,
            truncation,
            timestamp: None,
            body_digest: String::new(),
        };
        c.body_digest = c.compute_body_digest();
        c
    }

    /// Recomputes `body_digest` after an edit.
    pub fn reseal(&mut self) {
        self.body_digest = self.compute_body_digest();
    }

    pub fn compute_body_digest(&self) -> String {
        let mut v = serde_json::to_value(self).expect("certificates always serialize");
        let obj = v.as_object_mut().expect("certificate is an object");
        obj.remove("body_digest");
        obj.remove("timestamp");
        digest(&v)
    }

    pub fn with_timestamp(mut self, ts: impl Into<String>) -> Certificate {
        self.timestamp = Some(ts.into());
        self
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("certificates always serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::MalformedPayload(e.to_string()))
    }
}

pub fn input_set(set: &IntSet) -> Value {
    json!({ "set": set.to_set_file() })
}

pub fn input_set_family(set: &IntSet, family: &FuncFamily) -> Value {
    json!({ "set": set.to_set_file(), "family": family.to_file() })
}

pub fn input_set_family2d(set: &IntSet, family: &FuncFamily2D) -> Value {
    json!({ "set": set.to_set_file(), "family2d": family.to_file() })
}

pub fn input_chain(chain: &Chain, families: &[FuncFamily]) -> Value {
    json!({
        "chain": chain.to_file(),
        "families": families.iter().map(FuncFamily::to_file).collect::<Vec<_>>(),
    })
}

pub fn input_vdw(n: u64, colors: u64, len: u64) -> Value {
    json!({ "n": n, "colors": colors, "len": len })
}

fn window_note(w: Window) -> String {
    format!("membership evaluated on window {w}; points above {} count as non-members", w.hi())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApParams {
    window: String,
    l: u64,
}

pub fn ap_certificate(set: &IntSet, w: &ApWitness) -> Certificate {
    let params = ApParams { window: set.window().to_string(), l: w.l };
    Certificate::seal(CertKind::Ap, input_set(set), to_value(&params), to_value(w), vec![window_note(set.window())])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PwsParams {
    window: String,
    r: u64,
    len: u64,
}

pub fn pws_certificate(set: &IntSet, w: &PwsWitness) -> Certificate {
    let params = PwsParams { window: set.window().to_string(), r: w.r, len: w.len };
    Certificate::seal(CertKind::Pws, input_set(set), to_value(&params), to_value(w), vec![window_note(set.window())])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pws2dParams {
    window: String,
    l: u64,
    #[serde(rename = "box")]
    bounds: Box2D,
    r1: u64,
    r2: u64,
    l1: u64,
    l2: u64,
    clipping: Clipping,
}

pub fn pws2d_certificate(set: &IntSet, l: u64, bounds: Box2D, w: &Pws2dWitness) -> Certificate {
    let clip = clipping(set.window(), l, bounds);
    let params = Pws2dParams {
        window: set.window().to_string(),
        l,
        bounds,
        r1: w.r1,
        r2: w.r2,
        l1: w.sub.a_width(),
        l2: w.sub.d_width(),
        clipping: clip,
    };
    let notes = vec![
        window_note(set.window()),
        format!(
            "{} cells (a, d) of box {bounds} have a + {l}d > {} and are clipped out of the lift",
            clip.clipped_cells, clip.window_hi
        ),
    ];
    Certificate::seal(CertKind::Pws2d, input_set(set), to_value(&params), to_value(w), notes)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsetParams {
    window: String,
    a_max: u64,
}

pub fn jset_certificate(set: &IntSet, family: &FuncFamily, a_max: u64, w: &JWitness) -> Certificate {
    let params = JsetParams { window: set.window().to_string(), a_max };
    let notes = vec![window_note(set.window()), format!("a searched in [1, {a_max}]")];
    Certificate::seal(CertKind::Jset, input_set_family(set, family), to_value(&params), to_value(w), notes)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Jset2dParams {
    window: String,
    b: u64,
    l: u64,
    a_max: u64,
}

pub fn jset2d_certificate(
    set: &IntSet,
    family: &FuncFamily2D,
    b: u64,
    l: u64,
    a_max: u64,
    w: &JWitness2D,
) -> Certificate {
    let params = Jset2dParams { window: set.window().to_string(), b, l, a_max };
    let notes = vec![
        window_note(set.window()),
        format!("a pair (x, y) is in the lift iff x, x+y, …, x+{l}y all lie in the window set"),
        format!("first coordinate searched in [1, {a_max}]"),
    ];
    Certificate::seal(CertKind::Jset2d, input_set_family2d(set, family), to_value(&params), to_value(w), notes)
}

/// What a chain certificate checked beyond the translate property.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChainMode {
    Translate,
    QuasiCentral { r: u64, len: u64 },
    CSet { a_max: u64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainParams {
    window: String,
    x_max: u64,
    check: ChainMode,
}

pub fn chain_certificate(chain: &Chain, families: &[FuncFamily], mode: ChainMode, report: &ChainReport) -> Certificate {
    let w = chain.window();
    let params = ChainParams { window: w.to_string(), x_max: report.x_max, check: mode };
    let notes = vec![
        window_note(w),
        format!("inclusions C_m ⊆ −x + C_n tested on [{}, {} − x]", w.lo(), w.hi()),
        format!("probes capped at x <= {}", report.x_max),
    ];
    Certificate::seal(CertKind::Chain, input_chain(chain, families), to_value(&params), to_value(report), notes)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VdwParams {
    budget: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VdwWitness {
    verdict: bool,
    /// An AP-free coloring of `[1, n]` when `verdict` is false.
    coloring: Option<Vec<u8>>,
    strategy: VdwStrategy,
}

/// `None` for an unknown verdict, which has nothing to certify.
pub fn vdw_certificate(n: u64, colors: u64, len: u64, budget: u64, outcome: &VdwOutcome) -> Option<Certificate> {
    let (verdict, coloring) = match &outcome.verdict {
        VdwVerdict::Holds => (true, None),
        VdwVerdict::Fails(c) => (false, Some(c.clone())),
        VdwVerdict::Unknown => return None,
    };
    let witness = VdwWitness { verdict, coloring, strategy: outcome.strategy };
    Some(Certificate::seal(
        CertKind::Vdw,
        input_vdw(n, colors, len),
        to_value(&VdwParams { budget }),
        to_value(&witness),
        vec![],
    ))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data always serializes")
}

fn decode<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::MalformedPayload(format!("{what}: {e}")))
}

fn field<'a>(input: &'a Value, key: &str) -> Result<&'a str> {
    input.get(key).and_then(Value::as_str).ok_or_else(|| Error::MalformedPayload(format!("input lacks `{key}`")))
}

fn payload<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::MalformedPayload(_) => e,
        other => Error::MalformedPayload(other.to_string()),
    })
}

fn input_set_of(input: &Value) -> Result<IntSet> {
    payload(IntSet::parse_set_file(field(input, "set")?))
}

/// Checks the seal and digests, then the claim.
///
/// `inputs`, when given, is the caller's own canonical input (see the
/// `input_*` builders); it must match the recorded digest. Returns
/// `Ok(false)` when the witness does not establish the claim.
pub fn verify_certificate(cert: &Certificate, inputs: Option<&Value>) -> Result<bool> {
    if cert.schema != SCHEMA {
        return Err(Error::MalformedPayload(format!("unsupported schema `{}`", cert.schema)));
    }
    if cert.compute_body_digest() != cert.body_digest {
        return Err(Error::DigestMismatch("certificate body does not match body_digest".into()));
    }
    if digest(&cert.input) != cert.input_digest {
        return Err(Error::DigestMismatch("embedded input does not match input_digest".into()));
    }
    if let Some(given) = inputs {
        if digest(given) != cert.input_digest {
            return Err(Error::DigestMismatch("supplied input differs from the certified input".into()));
        }
    }
    let kind: CertKind = cert.kind.parse()?;
    let verdict = match kind {
        CertKind::Ap => verify_ap_cert(cert),
        CertKind::Pws => verify_pws_cert(cert),
        CertKind::Pws2d => verify_pws2d_cert(cert),
        CertKind::Jset => verify_jset_cert(cert),
        CertKind::Jset2d => verify_jset2d_cert(cert),
        CertKind::Chain => verify_chain_cert(cert),
        CertKind::Vdw => verify_vdw_cert(cert),
    };
    match verdict {
        Err(Error::MalformedWitness(_)) => Ok(false),
        other => other,
    }
}

fn verify_ap_cert(cert: &Certificate) -> Result<bool> {
    let set = input_set_of(&cert.input)?;
    let p: ApParams = decode(&cert.params, "params")?;
    let w: ApWitness = decode(&cert.witness, "witness")?;
    Ok(p.window == set.window().to_string() && p.l == w.l && w.l >= 1 && verify_ap(&set, &w))
}

fn verify_pws_cert(cert: &Certificate) -> Result<bool> {
    let set = input_set_of(&cert.input)?;
    let p: PwsParams = decode(&cert.params, "params")?;
    let w: PwsWitness = decode(&cert.witness, "witness")?;
    Ok(p.window == set.window().to_string() && (p.r, p.len) == (w.r, w.len) && w.verify(&set))
}

fn verify_pws2d_cert(cert: &Certificate) -> Result<bool> {
    let set = input_set_of(&cert.input)?;
    let p: Pws2dParams = decode(&cert.params, "params")?;
    let w: Pws2dWitness = decode(&cert.witness, "witness")?;
    let bounds = payload(Box2D::new(p.bounds.a_lo, p.bounds.a_hi, p.bounds.d_lo, p.bounds.d_hi))?;
    let sub = payload(Box2D::new(w.sub.a_lo, w.sub.a_hi, w.sub.d_lo, w.sub.d_hi))?;
    if p.window != set.window().to_string()
        || p.l == 0
        || (p.r1, p.r2) != (w.r1, w.r2)
        || (p.l1, p.l2) != (sub.a_width(), sub.d_width())
        || !bounds.contains_box(&sub)
        || p.clipping != clipping(set.window(), p.l, bounds)
    {
        return Ok(false);
    }
    // Only the witnessed sub-box of the lift is needed.
    Ok(w.verify(&lift(&set, p.l, sub)))
}

fn verify_jset_cert(cert: &Certificate) -> Result<bool> {
    let set = input_set_of(&cert.input)?;
    let family = payload(FuncFamily::parse_file(field(&cert.input, "family")?))?;
    let p: JsetParams = decode(&cert.params, "params")?;
    let w: JWitness = decode(&cert.witness, "witness")?;
    Ok(p.window == set.window().to_string() && w.a <= p.a_max && verify_jwitness(&set, &family, &w)?)
}

fn verify_jset2d_cert(cert: &Certificate) -> Result<bool> {
    let set = input_set_of(&cert.input)?;
    let family = payload(FuncFamily2D::parse_file(field(&cert.input, "family2d")?))?;
    let p: Jset2dParams = decode(&cert.params, "params")?;
    let w: JWitness2D = decode(&cert.witness, "witness")?;
    Ok(p.window == set.window().to_string()
        && p.b >= 1
        && p.l >= 1
        && w.a.0 <= p.a_max
        && Some(w.a.1) == p.b.checked_mul(w.h.len() as u64)
        && verify_jwitness2d(&set, &family, p.l, &w)?)
}

fn verify_chain_cert(cert: &Certificate) -> Result<bool> {
    let chain = payload(Chain::parse_file(field(&cert.input, "chain")?))?;
    let families = cert
        .input
        .get("families")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MalformedPayload("input lacks `families`".into()))?
        .iter()
        .map(|f| payload(FuncFamily::parse_file(f.as_str().unwrap_or(""))))
        .collect::<Result<Vec<_>>>()?;
    let p: ChainParams = decode(&cert.params, "params")?;
    let report: ChainReport = decode(&cert.witness, "witness")?;
    if p.window != chain.window().to_string() || p.x_max != report.x_max {
        return Ok(false);
    }
    let levels_match = match p.check {
        ChainMode::Translate => report.levels.is_empty() && families.is_empty(),
        ChainMode::QuasiCentral { r, len } => {
            !report.levels.is_empty()
                && report
                    .levels
                    .iter()
                    .all(|e| matches!(e, LevelEvidence::Pws { r: r2, len: l2, .. } if (*r2, *l2) == (r, len)))
        }
        ChainMode::CSet { a_max } => {
            !report.levels.is_empty()
                && report.levels.iter().all(|e| match e {
                    LevelEvidence::Jset { witnesses } => witnesses.iter().flatten().all(|w| w.a <= a_max),
                    LevelEvidence::Pws { .. } => false,
                })
        }
    };
    Ok(levels_match && report.reverify(&chain, &families)?)
}

fn verify_vdw_cert(cert: &Certificate) -> Result<bool> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        n: u64,
        colors: u64,
        len: u64,
    }
    let i: In = decode(&cert.input, "input")?;
    let p: VdwParams = decode(&cert.params, "params")?;
    let w: VdwWitness = decode(&cert.witness, "witness")?;
    if i.n == 0 || i.colors == 0 || i.len == 0 || i.colors > 256 {
        return Err(Error::MalformedPayload("vdw sizes out of range".into()));
    }
    match (w.verdict, w.coloring) {
        (false, Some(c)) => {
            Ok(c.len() as u64 == i.n && c.iter().all(|&x| (x as u64) < i.colors) && is_ap_free(&c, i.len as usize))
        }
        (true, None) => {
            let budget = p.budget.max(DEFAULT_BUDGET);
            match every_coloring_has_ap(i.n as usize, i.colors as u16, i.len as usize, budget) {
                Some(holds) => Ok(holds),
                None => Err(Error::Precondition(format!("re-enumeration exceeded {budget} nodes"))),
            }
        }
        _ => Ok(false),
    }
}

/// Plain depth-first re-enumeration (first position fixed to color 0 by symmetry).
/// `None` when `budget` nodes were not enough.
fn every_coloring_has_ap(n: usize, colors: u16, k: usize, budget: u64) -> Option<bool> {
    if k <= 1 {
        return Some(n >= 1);
    }
    let mut c = vec![0u8; n];
    let mut nodes = 0u64;
    // Does position p close a monochromatic k-term AP ending at p?
    let closes = |c: &[u8], p: usize| (1..=p / (k - 1)).any(|d| (1..k).all(|i| c[p - i * d] == c[p]));
    fn go(
        c: &mut Vec<u8>,
        p: usize,
        colors: u16,
        nodes: &mut u64,
        budget: u64,
        closes: &dyn Fn(&[u8], usize) -> bool,
    ) -> Option<bool> {
        if p == c.len() {
            return Some(true);
        }
        let top = if p == 0 { 1 } else { colors };
        for col in 0..top {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            c[p] = col as u8;
            if !closes(&c[..=p], p) && go(c, p + 1, colors, nodes, budget, closes)? {
                return Some(true);
            }
        }
        Some(false)
    }
    go(&mut c, 0, colors, &mut nodes, budget, &closes).map(|found_free| !found_free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jset::{jset_witness, transfer_witness};
    use crate::largeness::{find_pws_witness, vdw_check};
    use crate::lift::{ap_search, find_pws_witness_2d};
    use crate::sets::{evaluate, SetExpr};
    use crate::towers::{check_cset, check_quasicentral, ChainKind};

    fn set(expr: &str, lo: u64, hi: u64) -> IntSet {
        evaluate(&expr.parse::<SetExpr>().unwrap(), Window::new(lo, hi).unwrap()).unwrap()
    }

    #[test]
    fn ap_round_trip_and_mutation() {
        let a = set("multiples(2)", 1, 100);
        let w = ap_search(&a, 2).unwrap().unwrap();
        assert_eq!(w, ApWitness { a: 2, d: 2, l: 2 });
        let c = ap_certificate(&a, &w).with_timestamp("2026-01-01T00:00:00Z");
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&back, None).unwrap());
        assert!(verify_certificate(&back, Some(&input_set(&a))).unwrap());

        let mut bad = c.clone();
        bad.witness["a"] = json!(3);
        assert!(matches!(verify_certificate(&bad, None), Err(Error::DigestMismatch(_))));
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());

        let other = set("multiples(3)", 1, 100);
        assert!(matches!(verify_certificate(&c, Some(&input_set(&other))), Err(Error::DigestMismatch(_))));
    }

    #[test]
    fn timestamp_is_outside_the_seal() {
        let a = set("multiples(2)", 1, 100);
        let w = ap_search(&a, 3).unwrap().unwrap();
        let c1 = ap_certificate(&a, &w).with_timestamp("t1");
        let c2 = ap_certificate(&a, &w).with_timestamp("t2");
        assert_eq!(c1.body_digest, c2.body_digest);
        assert!(verify_certificate(&c2, None).unwrap());
    }

    #[test]
    fn unknown_kind_and_schema() {
        let a = set("multiples(2)", 1, 50);
        let mut c = ap_certificate(&a, &ap_search(&a, 1).unwrap().unwrap());
        c.kind = "mystery".into();
        c.reseal();
        assert!(matches!(verify_certificate(&c, None), Err(Error::UnknownKind(_))));
        c.kind = "ap".into();
        c.schema = "other/9".into();
        c.reseal();
        assert!(matches!(verify_certificate(&c, None), Err(Error::MalformedPayload(_))));
    }

    #[test]
    fn pws_and_pws2d() {
        let a = set("union(ap(1, 3), thick(200:260))", 1, 400);
        let w = find_pws_witness(&a, 3, 50).unwrap().unwrap();
        let c = pws_certificate(&a, &w);
        assert!(verify_certificate(&c, None).unwrap());
        let mut bad = c.clone();
        bad.params["r"] = json!(2);
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());

        let bounds = Box2D::induced(a.window(), 2).unwrap();
        let lifted = lift(&a, 2, bounds);
        let w2 = find_pws_witness_2d(&lifted, 6, 6, 20, 20).unwrap().unwrap();
        let c2 = pws2d_certificate(&a, 2, bounds, &w2);
        assert!(verify_certificate(&c2, None).unwrap());
        let mut bad = c2.clone();
        bad.witness["r1"] = json!(1);
        bad.params["r1"] = json!(1);
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());
    }

    #[test]
    fn jset_and_transfer() {
        let a = set("multiples(3)", 1, 300);
        let fam = FuncFamily::new(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8]]).unwrap();
        let w = jset_witness(&a, &fam, 50).unwrap().unwrap();
        let c = jset_certificate(&a, &fam, 50, &w);
        assert!(verify_certificate(&c, Some(&input_set_family(&a, &fam))).unwrap());
        let mut bad = c.clone();
        bad.witness["h"] = json!([3, 1]);
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());

        let a = set("multiples(2)", 1, 200);
        let f2 = FuncFamily2D::new(vec![(vec![1], vec![1])]).unwrap();
        let w2 = transfer_witness(&a, &f2, 1, 1, 100).unwrap().unwrap();
        let c2 = jset2d_certificate(&a, &f2, 1, 1, 100, &w2);
        assert!(verify_certificate(&c2, None).unwrap());
        let mut bad = c2.clone();
        bad.params["b"] = json!(2);
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());
    }

    #[test]
    fn chain_certificates() {
        let w = Window::new(1, 256).unwrap();
        let levels = (1..=4).map(|n| evaluate(&SetExpr::Multiples(1 << n), w).unwrap()).collect();
        let chain = Chain::new(levels, ChainKind::QuasiCentral).unwrap();
        let report = check_quasicentral(&chain, 16, 64, 32).unwrap();
        assert!(report.pass);
        let c = chain_certificate(&chain, &[], ChainMode::QuasiCentral { r: 16, len: 64 }, &report);
        assert!(verify_certificate(&c, None).unwrap());
        let mut bad = c.clone();
        bad.witness["translate"][0]["m"] = json!(2);
        bad.reseal();
        assert!(!verify_certificate(&bad, None).unwrap());

        let levels = (1..=3).map(|n| evaluate(&SetExpr::Multiples(1 << n), w).unwrap()).collect();
        let chain = Chain::new(levels, ChainKind::CSet).unwrap();
        let fams = vec![FuncFamily::new(vec![vec![1, 2, 3]]).unwrap()];
        let report = check_cset(&chain, &fams, 64, 16).unwrap();
        let c = chain_certificate(&chain, &fams, ChainMode::CSet { a_max: 64 }, &report);
        assert!(verify_certificate(&c, None).unwrap());
    }

    #[test]
    fn vdw_both_verdicts() {
        for (n, holds) in [(9, true), (8, false)] {
            let out = vdw_check(n, 2, 3, DEFAULT_BUDGET).unwrap();
            let c = vdw_certificate(n, 2, 3, DEFAULT_BUDGET, &out).unwrap();
            assert_eq!(c.witness["verdict"], json!(holds));
            assert!(verify_certificate(&c, None).unwrap());
        }
        let out = vdw_check(8, 2, 3, DEFAULT_BUDGET).unwrap();
        let mut c = vdw_certificate(8, 2, 3, DEFAULT_BUDGET, &out).unwrap();
        c.witness["verdict"] = json!(true);
        c.witness["coloring"] = Value::Null;
        c.reseal();
        assert!(!verify_certificate(&c, None).unwrap());
    }

    #[test]
    fn independent_enumeration_matches_known_values() {
        assert_eq!(every_coloring_has_ap(9, 2, 3, 1 << 20), Some(true));
        assert_eq!(every_coloring_has_ap(8, 2, 3, 1 << 20), Some(false));
        assert_eq!(every_coloring_has_ap(27, 3, 3, 1 << 26), Some(true));
        assert_eq!(every_coloring_has_ap(26, 3, 3, 1 << 26), Some(false));
        assert_eq!(every_coloring_has_ap(30, 2, 4, 10), None);
    }
}
