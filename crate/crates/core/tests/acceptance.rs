//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aplift::cert::{verify_certificate, Certificate};
use aplift::jset::{
    build_transfer_family, jset_witness, lifted_points, transfer_witness, FuncFamily, FuncFamily2D, JWitness,
};
use aplift::largeness::{is_ap_free, vdw_check, VdwStrategy, VdwVerdict, DEFAULT_BUDGET};
use aplift::lift::{ap_search, find_pws_witness_2d, lift, ApWitness, Box2D, Pws2dWitness};
use aplift::towers::{
    check_quasicentral, eq1_inclusion_search, lift_chain, verify_lifted_translate, Chain, ChainKind, InclusionSearch,
};
use aplift::{evaluate, IntSet, SetExpr};
use common::{eval, leaf_paths, perturb, random_certificate, window, KINDS};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Monochromatic k-term progression in a coloring of [1, n], by triple loop.
fn has_mono_ap(c: &[u8], k: usize) -> bool {
    let n = c.len();
    (0..n).any(|a| (1..n).any(|d| a + (k - 1) * d < n && (1..k).all(|i| c[a + i * d] == c[a])))
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let nine = vdw_check(9, 2, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let eight = vdw_check(8, 2, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(nine.verdict == VdwVerdict::Holds, || format!("vdw(9,2,3) = {:?}", nine.verdict))?;
    ensure(nine.strategy == VdwStrategy::Exhaustive && nine.work == 512, || format!("vdw(9,2,3) searched {:?}", nine))?;
    let VdwVerdict::Fails(coloring) = &eight.verdict else {
        return Err(format!("vdw(8,2,3) = {:?}", eight.verdict));
    };
    ensure(eight.strategy == VdwStrategy::Exhaustive, || "vdw(8,2,3) was not exhaustive".into())?;
    ensure(coloring.len() == 8 && is_ap_free(coloring, 3) && !has_mono_ap(coloring, 3), || {
        format!("returned coloring {coloring:?} is not AP-free")
    })?;
    // Oracle: all 2^9 colorings contain a 3-AP, some 2^8 coloring does not.
    let all = |n: usize| (0u32..1 << n).map(move |m| (0..n).map(|i| (m >> i & 1) as u8).collect::<Vec<_>>());
    ensure(all(9).all(|c| has_mono_ap(&c, 3)), || "oracle disagrees at n = 9".into())?;
    ensure(all(8).any(|c| !has_mono_ap(&c, 3)), || "oracle disagrees at n = 8".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("vdw(9,2,3)=true, vdw(8,2,3)=false with coloring {coloring:?}, {elapsed:.2?}"))
}

/// Naive block scan for the first `l1 × l2` sub-box (d-start, then a-start)
/// on which every `r1 × r2` block meets the lift; membership straight from `set`.
fn pws2d_oracle(set: &IntSet, l: u64, b: Box2D, r: (u64, u64), size: (u64, u64)) -> Option<Box2D> {
    let member = |a: u64, d: u64| (0..=l).all(|i| set.contains(a + i * d));
    for d0 in b.d_lo..=b.d_hi + 1 - size.1 {
        for a0 in b.a_lo..=b.a_hi + 1 - size.0 {
            let ok = (d0..=d0 + size.1 - r.1).all(|bd| {
                (a0..=a0 + size.0 - r.0).all(|ba| (bd..bd + r.1).any(|d| (ba..ba + r.0).any(|a| member(a, d))))
            });
            if ok {
                return Some(Box2D::new(a0, a0 + size.0 - 1, d0, d0 + size.1 - 1).unwrap());
            }
        }
    }
    None
}

fn criterion_2() -> Outcome {
    const SEED: u64 = 0x7e57_0002;
    const SIZE: u64 = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let w = window(1, 1000);
    let mut spent = Duration::ZERO;
    let mut runs = 0;
    for case in 0..20 {
        let parts: Vec<(u64, u64)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let s = rng.gen_range(1..=8);
                (rng.gen_range(1..=s), s)
            })
            .collect();
        let expr = SetExpr::Union(parts.iter().map(|&(start, step)| SetExpr::Ap { start, step }).collect());
        let set = evaluate(&expr, w).unwrap();
        let step = parts.iter().map(|p| p.1).min().unwrap();
        for l in [2u64, 3] {
            let r = step * l;
            let bounds = Box2D::induced(w, l).unwrap();
            let t = Instant::now();
            let lifted = lift(&set, l, bounds);
            let found = find_pws_witness_2d(&lifted, r, r, SIZE, SIZE).map_err(|e| e.to_string())?;
            spent += t.elapsed();
            runs += 1;
            let oracle = pws2d_oracle(&set, l, bounds, (r, r), (SIZE, SIZE));
            let Some(Pws2dWitness { sub, .. }) = found else {
                return Err(format!("case {case} ({expr}, l={l}): no witness at r={r}"));
            };
            ensure(oracle == Some(sub), || format!("case {case} ({expr}, l={l}): found {sub}, oracle {oracle:?}"))?;
        }
    }
    ensure(spent < Duration::from_secs(10), || format!("library time {spent:?}"))?;
    Ok(format!(
        "{runs} lifts on [1,1000], induced boxes, {SIZE}x{SIZE} witnesses at r=step*l, seed {SEED:#x}, {spent:.2?}"
    ))
}

/// First `(a, H)` by brute force in the order |H|, H, a.
fn jset_oracle(set: &IntSet, family: &FuncFamily, a_max: u64) -> Option<JWitness> {
    let t = family.horizon();
    for k in 1..=t {
        for h in (1..=t).combinations(k) {
            for a in 1..=a_max {
                if family.funcs().iter().all(|f| set.contains(a + h.iter().map(|&i| f[i - 1]).sum::<u64>())) {
                    return Some(JWitness { a, h });
                }
            }
        }
    }
    None
}

fn criterion_3() -> Outcome {
    const SEED: u64 = 0x7e57_0003;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut successes, mut compared, mut failures) = (0, 0, Vec::new());
    for case in 0..100 {
        let q = rng.gen_range(1..=5);
        let set = eval(&format!("multiples({q})"), window(1, 2000));
        let m = rng.gen_range(1..=3);
        let t = rng.gen_range(1..=4);
        let mut row = || (0..t).map(|_| rng.gen_range(1..=10)).collect::<Vec<u64>>();
        let pairs: Vec<_> = (0..m).map(|_| (row(), row())).collect();
        let fam = FuncFamily2D::new(pairs).unwrap();
        let (b, l) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a_max = rng.gen_range(1..=64);
        let g = build_transfer_family(&fam, b, l).unwrap();
        let w = jset_witness(&set, &g, a_max).unwrap();
        if a_max << t <= 1 << 16 {
            compared += 1;
            let oracle = jset_oracle(&set, &g, a_max);
            if oracle != w {
                failures.push(format!("case {case}: search {w:?} vs oracle {oracle:?}"));
            }
        }
        let Some(w) = w else { continue };
        successes += 1;
        match transfer_witness(&set, &fam, b, l, a_max) {
            Ok(Some(w2)) => {
                let expected = (w.a, b * w.h.len() as u64);
                let lands = lifted_points(&fam, &w2).iter().all(|&(x, y)| (0..=l).all(|i| set.contains(x + i * y)));
                if w2.a != expected || w2.h != w.h || !lands {
                    failures.push(format!("case {case}: transferred {w2:?} from {w:?}"));
                }
            }
            other => failures.push(format!("case {case}: transfer gave {other:?}")),
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    ensure(successes > 0, || "no instance had a witness".into())?;
    Ok(format!("100 instances, {successes} transferred with 0 failures, {compared} matched the exhaustive oracle, seed {SEED:#x}"))
}

fn criterion_4() -> Outcome {
    let set = eval("multiples(2)", window(1, 200));
    let fam = FuncFamily2D::new(vec![((1..=4).collect(), (1..=4).collect())]).unwrap();
    let w = transfer_witness(&set, &fam, 1, 1, 200).map_err(|e| e.to_string())?.ok_or("no witness")?;
    ensure(w.a == (1, 1) && w.h == vec![1], || format!("witness {w:?}"))?;
    let points = lifted_points(&fam, &w);
    ensure(points == vec![(2, 2)], || format!("points {points:?}"))?;
    ensure(set.contains(2) && set.contains(4), || "AP {2, 4} not in A".into())?;
    Ok("witness ((1,1), {1}), pair (2,2), AP {2,4} in multiples(2)".into())
}

fn criterion_5() -> Outcome {
    let w = window(1, 1024);
    let levels = (1..=5).map(|n| evaluate(&SetExpr::Multiples(1 << n), w).unwrap()).collect();
    let chain = Chain::new(levels, ChainKind::QuasiCentral).unwrap();
    let report = check_quasicentral(&chain, 32, 256, 64).map_err(|e| e.to_string())?;
    ensure(report.pass, || {
        format!("quasi-central check failed: {:?}", report.translate_failures().collect::<Vec<_>>())
    })?;
    ensure(report.reverify(&chain, &[]).map_err(|e| e.to_string())?, || "report does not re-verify".into())?;
    let (mut found, mut shallow) = (0, 0);
    for l in 1..=3u64 {
        let chain2d = lift_chain(&chain, l, Box2D::induced(w, l).unwrap());
        for n in 1..=3 {
            for (a, b) in (1..=32u64).cartesian_product(1..=32u64).filter(|&(a, b)| chain2d.level(n).contains(a, b)) {
                match eq1_inclusion_search(&chain, n, a, b, l).map_err(|e| e.to_string())? {
                    InclusionSearch::Found(big_n) => {
                        found += 1;
                        let ok = verify_lifted_translate(&chain2d, n, big_n, a, b).map_err(|e| e.to_string())?;
                        ensure(ok, || format!("l={l} n={n} (a,b)=({a},{b}) N={big_n}: lifted translate fails"))?;
                    }
                    InclusionSearch::InsufficientDepth => shallow += 1,
                }
            }
        }
    }
    ensure(found > 0, || "no successful probe".into())?;
    Ok(format!(
        "quasi-central at (32,256,64); {found} probes found N and all lifted translates hold ({shallow} out of depth)"
    ))
}

fn criterion_6() -> Outcome {
    const SEED: u64 = 0x7e57_0006;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut survivors = Vec::new();
    for i in 0..100 {
        let kind = KINDS[i % KINDS.len()];
        let c = random_certificate(&mut rng, kind).with_timestamp(format!("unix:{i}"));
        let back = Certificate::from_json(&c.to_json()).map_err(|e| e.to_string())?;
        ensure(matches!(verify_certificate(&back, None), Ok(true)), || {
            format!("{kind} certificate #{i} does not verify")
        })?;

        let v = serde_json::to_value(&back).unwrap();
        let paths = leaf_paths(&v);
        let path = &paths[rng.gen_range(0..paths.len())];
        let mut bad = v.clone();
        perturb(&mut bad, path, &mut rng);
        let rejected = match serde_json::from_value::<Certificate>(bad) {
            Err(_) => true,
            Ok(c) => !matches!(verify_certificate(&c, None), Ok(true)),
        };
        if !rejected {
            survivors.push(format!("{kind}{path}"));
        }
    }
    ensure(survivors.is_empty(), || format!("mutations survived: {survivors:?}"))?;
    Ok(format!("100 certificates round-trip, 100 single-field mutations rejected, seed {SEED:#x}"))
}

fn ap_oracle(set: &IntSet, l: u64) -> Option<ApWitness> {
    let (lo, hi) = (set.window().lo(), set.window().hi());
    (1..=hi - lo).find_map(|d| {
        (lo..=hi).find(|&a| a + l * d <= hi && (0..=l).all(|i| set.contains(a + i * d))).map(|a| ApWitness { a, d, l })
    })
}

fn criterion_7() -> Outcome {
    const SEED: u64 = 0x7e57_0007;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut hits, mut total) = (0, 0);
    for case in 0..50 {
        let width = rng.gen_range(1..=512);
        let lo = rng.gen_range(1..=64);
        let density = [0.2, 0.5, 0.8][case % 3];
        let members: Vec<u64> = (lo..lo + width).filter(|_| rng.gen_bool(density)).collect();
        let set = IntSet::from_members(window(lo, lo + width - 1), members).unwrap();
        for l in 1..=4 {
            total += 1;
            let got = ap_search(&set, l).map_err(|e| e.to_string())?;
            let want = ap_oracle(&set, l);
            ensure(got == want, || format!("case {case} (width {width}, p {density}, l {l}): {got:?} vs {want:?}"))?;
            hits += got.is_some() as usize;
        }
    }
    Ok(format!("{total} searches on 50 sets agree with the quadratic oracle ({hits} witnesses), seed {SEED:#x}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("van der Waerden floor", criterion_1),
        ("lift of piecewise-syndetic sets", criterion_2),
        ("J-set transfer", criterion_3),
        ("hand-checked transfer instance", criterion_4),
        ("chain translates and their lifts", criterion_5),
        ("certificate integrity", criterion_6),
        ("ap_search oracle equivalence", criterion_7),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
