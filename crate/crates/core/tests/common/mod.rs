#![allow(dead_code)]

use aplift::cert::{self, Certificate, ChainMode};
use aplift::jset::{jset_witness, transfer_witness, FuncFamily, FuncFamily2D};
use aplift::largeness::{find_pws_witness, min_r_for_len, vdw_check, DEFAULT_BUDGET};
use aplift::lift::{ap_search, find_pws_witness_2d, lift, Box2D};
use aplift::towers::{check_quasicentral, check_translate_property, Chain, ChainKind};
use aplift::{evaluate, IntSet, SetExpr, Window};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

pub fn window(lo: u64, hi: u64) -> Window {
    Window::new(lo, hi).unwrap()
}

pub fn eval(expr: &str, w: Window) -> IntSet {
    evaluate(&expr.parse::<SetExpr>().unwrap(), w).unwrap()
}

/// An AP with step `s <= 8` plus Bernoulli noise.
pub fn noisy_ap_set<R: Rng>(rng: &mut R, width: u64) -> (IntSet, u64) {
    let s = rng.gen_range(1..=8);
    let start = rng.gen_range(1..=s);
    let p = rng.gen_range(0..=30);
    let seed: u64 = rng.gen();
    let expr = format!("union(ap({start}, {s}), bernoulli(0.{p:02}, {seed}))");
    (eval(&expr, window(1, width)), s)
}

pub fn random_family<R: Rng>(rng: &mut R, max_m: usize, max_t: usize, max_v: u64) -> Vec<Vec<u64>> {
    let m = rng.gen_range(1..=max_m);
    let t = rng.gen_range(1..=max_t);
    (0..m).map(|_| (0..t).map(|_| rng.gen_range(1..=max_v)).collect()).collect()
}

pub const KINDS: [&str; 7] = ["ap", "pws", "pws2d", "jset", "jset2d", "chain", "vdw"];

/// A valid certificate of the given kind built from random inputs.
pub fn random_certificate<R: Rng>(rng: &mut R, kind: &str) -> Certificate {
    loop {
        if let Some(c) = try_certificate(rng, kind) {
            return c;
        }
    }
}

fn try_certificate<R: Rng>(rng: &mut R, kind: &str) -> Option<Certificate> {
    match kind {
        "ap" => {
            let width = rng.gen_range(40..=300);
            let (set, _) = noisy_ap_set(rng, width);
            let w = ap_search(&set, rng.gen_range(1..=4)).unwrap()?;
            Some(cert::ap_certificate(&set, &w))
        }
        "pws" => {
            let width = rng.gen_range(40..=300);
            let (set, _) = noisy_ap_set(rng, width);
            let len = rng.gen_range(1..=set.window().width());
            let r = min_r_for_len(&set, len).unwrap()?;
            let w = find_pws_witness(&set, r, len).unwrap()?;
            Some(cert::pws_certificate(&set, &w))
        }
        "pws2d" => {
            let width = rng.gen_range(100..=300);
            let (set, s) = noisy_ap_set(rng, width);
            let l = rng.gen_range(1..=3);
            let bounds = Box2D::induced(set.window(), l).ok()?;
            let lifted = lift(&set, l, bounds);
            let (l1, l2) = (rng.gen_range(1..=bounds.a_width().min(24)), rng.gen_range(1..=bounds.d_width().min(12)));
            let w = find_pws_witness_2d(&lifted, s, s, l1, l2).unwrap()?;
            Some(cert::pws2d_certificate(&set, l, bounds, &w))
        }
        "jset" => {
            let q = rng.gen_range(1..=5);
            let set = eval(&format!("multiples({q})"), window(1, 500));
            let fam = FuncFamily::new(random_family(rng, 3, 4, 10)).unwrap();
            let w = jset_witness(&set, &fam, 64).unwrap()?;
            Some(cert::jset_certificate(&set, &fam, 64, &w))
        }
        "jset2d" => {
            let q = rng.gen_range(1..=5);
            let set = eval(&format!("multiples({q})"), window(1, 800));
            let rows = random_family(rng, 2, 4, 10);
            let t = rows[0].len();
            let pairs = rows.into_iter().map(|x| (x, (0..t).map(|_| rng.gen_range(1..=10)).collect())).collect();
            let fam = FuncFamily2D::new(pairs).unwrap();
            let (b, l) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let w = transfer_witness(&set, &fam, b, l, 64).unwrap()?;
            Some(cert::jset2d_certificate(&set, &fam, b, l, 64, &w))
        }
        "chain" => {
            let q: u64 = rng.gen_range(2..=3);
            let k = rng.gen_range(1..=3u32);
            let hi = rng.gen_range(64..=256);
            let w = window(1, hi);
            let levels = (1..=k).map(|n| evaluate(&SetExpr::Multiples(q.pow(n)), w).unwrap()).collect();
            let chain = Chain::new(levels, ChainKind::QuasiCentral).unwrap();
            let x_max = rng.gen_range(1..=hi / 2);
            if rng.gen_bool(0.5) {
                let report = check_translate_property(&chain, x_max).unwrap();
                Some(cert::chain_certificate(&chain, &[], ChainMode::Translate, &report))
            } else {
                let (r, len) = (q.pow(k), rng.gen_range(1..=hi));
                let report = check_quasicentral(&chain, r, len, x_max).unwrap();
                Some(cert::chain_certificate(&chain, &[], ChainMode::QuasiCentral { r, len }, &report))
            }
        }
        "vdw" => {
            let n = rng.gen_range(3..=10);
            let out = vdw_check(n, 2, 3, DEFAULT_BUDGET).unwrap();
            cert::vdw_certificate(n, 2, 3, DEFAULT_BUDGET, &out)
        }
        other => panic!("unknown kind {other}"),
    }
}

/// JSON pointers to every leaf, skipping the timestamp.
pub fn leaf_paths(v: &Value) -> Vec<String> {
    fn walk(v: &Value, at: String, out: &mut Vec<String>) {
        match v {
            Value::Object(m) if !m.is_empty() => {
                for (k, x) in m {
                    walk(x, format!("{at}/{}", k.replace('~', "~0").replace('/', "~1")), out)
                }
            }
            Value::Array(xs) if !xs.is_empty() => {
                for (i, x) in xs.iter().enumerate() {
                    walk(x, format!("{at}/{i}"), out)
                }
            }
            _ => out.push(at),
        }
    }
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out.retain(|p| p != "/timestamp");
    out
}

/// Changes the value at `path` to a different value of the same shape where possible.
pub fn perturb<R: Rng>(v: &mut Value, path: &str, rng: &mut R) {
    let x = v.pointer_mut(path).expect("path exists");
    *x = match x.take() {
        Value::Number(n) => match n.as_u64() {
            Some(0) => Value::from(1u64),
            Some(k) => Value::from(if rng.gen_bool(0.5) { k + 1 } else { k - 1 }),
            None => Value::from(0u64),
        },
        Value::Bool(b) => Value::Bool(!b),
        Value::String(s) => Value::String(perturb_str(&s, rng)),
        Value::Null => Value::from(1u64),
        Value::Array(_) => Value::Array(vec![Value::from(1u64)]),
        Value::Object(_) => Value::from(1u64),
    };
}

fn perturb_str<R: Rng>(s: &str, rng: &mut R) -> String {
    let mut chars: Vec<char> = s.chars().collect();
    let flippable: Vec<usize> = (0..chars.len()).filter(|&i| chars[i] == '0' || chars[i] == '1').collect();
    match flippable.choose(rng) {
        Some(&i) => {
            chars[i] = if chars[i] == '0' { '1' } else { '0' };
            chars.into_iter().collect()
        }
        None => format!("{s}x"),
    }
}
