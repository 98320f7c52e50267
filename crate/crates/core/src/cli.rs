//! The `aplift` command line.
//!
//! Exit codes: 0 success, 1 negative or absent result, 2 invalid input,
//! 3 search budget exceeded, 4 certificate invalid. `APLIFT_BUDGET` overrides
//! the default search budget.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cert::{self, CertKind, Certificate, ChainMode};
use crate::dsl::parse_dsl;
use crate::error::{Error, Result};
use crate::jset::{jset_witness, lifted_points, transfer_witness, FuncFamily, FuncFamily2D};
use crate::largeness::{
    find_pws_witness, gap_profile, longest_run, min_r_for_len, vdw_check, VdwVerdict, DEFAULT_BUDGET,
};
use crate::lift::{ap_search, clipping, find_pws_witness_2d, lift, Box2D};
use crate::sets::{evaluate, IntSet, Window};
use crate::towers::{check_cset, check_quasicentral, check_translate_property, Chain};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CERT_INVALID: i32 = 4;

pub const BUDGET_ENV: &str = "APLIFT_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "aplift", version, about = "Largeness witnesses and certificates for sets of integers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Gap, thickness and piecewise-syndetic report for a set.
    Analyze {
        #[command(flatten)]
        set: SetArgs,
        /// Interval length L for the piecewise-syndetic scan.
        #[arg(long)]
        len: Option<u64>,
        /// Gap bound r for the piecewise-syndetic scan (needs --len).
        #[arg(long, requires = "len")]
        r: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least (d, a) with a, a+d, …, a+l·d in the set.
    Ap {
        #[command(flatten)]
        set: SetArgs,
        /// l, so the progression has l + 1 terms.
        #[arg(long)]
        len: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Piecewise-syndetic witness for the AP-lift on a box.
    Lift {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        len: u64,
        /// `lo1:hi1,lo2:hi2`; defaults to the box induced by the window.
        #[arg(long = "box")]
        bounds: Option<String>,
        #[arg(long)]
        r1: u64,
        #[arg(long)]
        r2: u64,
        #[arg(long)]
        l1: u64,
        #[arg(long)]
        l2: u64,
        /// Also write the lifted set in Set2D file format.
        #[arg(long)]
        set2d_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// J-set witness against a function family.
    Jset {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        a_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// J-set witness for the lift, found through the transfer family.
    Transfer {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        family2d: PathBuf,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long)]
        len: u64,
        #[arg(long)]
        a_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate property and per-level largeness of a chain.
    Tower {
        #[arg(long)]
        chain: PathBuf,
        /// translate, quasi-central or c-set; defaults to the chain's kind.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        len: Option<u64>,
        /// Function family file; repeat for several.
        #[arg(long)]
        family: Vec<PathBuf>,
        #[arg(long)]
        a_max: Option<u64>,
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Does every coloring of [1, n] contain a monochromatic progression?
    Vdw {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        colors: u64,
        /// Number of terms in the progression.
        #[arg(long)]
        len: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate, optionally against separately supplied input.
    Verify {
        cert: PathBuf,
        #[command(flatten)]
        set: OptSetArgs,
        #[arg(long)]
        family: Vec<PathBuf>,
        #[arg(long)]
        family2d: Option<PathBuf>,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        colors: Option<u64>,
        #[arg(long)]
        len: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct SetArgs {
    /// Set expression, e.g. `union(ap(3,5), interval(40,60))`.
    #[arg(long, conflicts_with = "set_file", required_unless_present = "set_file")]
    set: Option<String>,
    #[arg(long)]
    set_file: Option<PathBuf>,
    /// `lo:hi`; required with --set, optional re-windowing with --set-file.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args, Debug)]
struct OptSetArgs {
    #[arg(long, conflicts_with = "set_file")]
    set: Option<String>,
    #[arg(long)]
    set_file: Option<PathBuf>,
    #[arg(long)]
    window: Option<String>,
}

impl SetArgs {
    fn load(&self) -> Result<IntSet> {
        load_set(self.set.as_deref(), self.set_file.as_deref(), self.window.as_deref())
    }
}

impl OptSetArgs {
    fn load(&self) -> Result<Option<IntSet>> {
        if self.set.is_none() && self.set_file.is_none() {
            return Ok(None);
        }
        load_set(self.set.as_deref(), self.set_file.as_deref(), self.window.as_deref()).map(Some)
    }
}

fn load_set(expr: Option<&str>, file: Option<&Path>, window: Option<&str>) -> Result<IntSet> {
    let window: Option<Window> = window.map(str::parse).transpose()?;
    match (expr, file) {
        (Some(e), _) => {
            let w = window.ok_or_else(|| Error::ParamOutOfRange("--set needs --window lo:hi".into()))?;
            evaluate(&parse_dsl(e)?.expr, w)
        }
        (None, Some(path)) => {
            let s = IntSet::parse_set_file(&read(path)?)?;
            Ok(match window {
                Some(w) => s.rewindow(w),
                None => s,
            })
        }
        (None, None) => Err(Error::ParamOutOfRange("give --set or --set-file".into())),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::ParamOutOfRange(format!("cannot read {}: {e}", path.display())))
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::ParamOutOfRange(format!("{BUDGET_ENV}=`{s}` is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::ParamOutOfRange(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_cert(c: Certificate, out: Option<&Path>) -> Result<()> {
    emit(&c.with_timestamp(timestamp()).to_json(), out)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DigestMismatch(_) | Error::UnknownKind(_) | Error::MalformedPayload(_) | Error::TransferFault(_) => {
            EXIT_CERT_INVALID
        }
        _ => EXIT_INVALID_INPUT,
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run_command<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Analyze { set, len, r, out } => analyze(&set.load()?, len, r, out.as_deref()),
        Cmd::Ap { set, len, out } => {
            let s = set.load()?;
            match ap_search(&s, len)? {
                Some(w) => {
                    eprintln!("ap: a={} d={} l={}", w.a, w.d, w.l);
                    emit_cert(cert::ap_certificate(&s, &w), out.as_deref())?;
                    Ok(EXIT_OK)
                }
                None => {
                    eprintln!("ap: no {}-term progression in [{}]", len + 1, s.window());
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Lift { set, len, bounds, r1, r2, l1, l2, set2d_out, out } => {
            let s = set.load()?;
            let bounds = match bounds {
                Some(b) => Box2D::parse(&b)?,
                None => Box2D::induced(s.window(), len)?,
            };
            if len == 0 {
                return Err(Error::ParamOutOfRange("--len must be >= 1".into()));
            }
            let lifted = lift(&s, len, bounds);
            if let Some(p) = set2d_out {
                emit(&lifted.to_file(), Some(&p))?;
            }
            let clip = clipping(s.window(), len, bounds);
            eprintln!(
                "lift: {} of {} cells, {} clipped",
                lifted.len(),
                bounds.a_width() * bounds.d_width(),
                clip.clipped_cells
            );
            match find_pws_witness_2d(&lifted, r1, r2, l1, l2)? {
                Some(w) => {
                    eprintln!("lift: ({r1}, {r2})-syndetic on {}", w.sub);
                    emit_cert(cert::pws2d_certificate(&s, len, bounds, &w), out.as_deref())?;
                    Ok(EXIT_OK)
                }
                None => {
                    eprintln!("lift: no {l1}x{l2} sub-box of {bounds} is ({r1}, {r2})-syndetic");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Jset { set, family, a_max, out } => {
            let s = set.load()?;
            let fam = FuncFamily::parse_file(&read(&family)?)?;
            match jset_witness(&s, &fam, a_max)? {
                Some(w) => {
                    eprintln!("jset: a={} H={:?}", w.a, w.h);
                    emit_cert(cert::jset_certificate(&s, &fam, a_max, &w), out.as_deref())?;
                    Ok(EXIT_OK)
                }
                None => {
                    eprintln!("jset: no witness with a <= {a_max}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Transfer { set, family2d, b, len, a_max, out } => {
            let s = set.load()?;
            let fam = FuncFamily2D::parse_file(&read(&family2d)?)?;
            match transfer_witness(&s, &fam, b, len, a_max)? {
                Some(w) => {
                    eprintln!("transfer: a=({}, {}) H={:?} points={:?}", w.a.0, w.a.1, w.h, lifted_points(&fam, &w));
                    emit_cert(cert::jset2d_certificate(&s, &fam, b, len, a_max, &w), out.as_deref())?;
                    Ok(EXIT_OK)
                }
                None => {
                    eprintln!("transfer: no witness for the transfer family with a <= {a_max}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Tower { chain, mode, r, len, family, a_max, x_max, out } => {
            let chain = Chain::parse_file(&read(&chain)?)?;
            let families = family.iter().map(|p| FuncFamily::parse_file(&read(p)?)).collect::<Result<Vec<_>>>()?;
            let mode = match mode.as_deref().unwrap_or(&chain.kind().to_string()) {
                "translate" => ChainMode::Translate,
                "quasi-central" | "qc" => ChainMode::QuasiCentral {
                    r: r.ok_or_else(|| Error::ParamOutOfRange("quasi-central mode needs --r".into()))?,
                    len: len.ok_or_else(|| Error::ParamOutOfRange("quasi-central mode needs --len".into()))?,
                },
                "c-set" | "cset" => ChainMode::CSet {
                    a_max: a_max.ok_or_else(|| Error::ParamOutOfRange("c-set mode needs --a-max".into()))?,
                },
                other => return Err(Error::ParamOutOfRange(format!("unknown mode `{other}`"))),
            };
            let report = match mode {
                ChainMode::Translate => {
                    if !families.is_empty() {
                        return Err(Error::ParamOutOfRange("--family only applies in c-set mode".into()));
                    }
                    check_translate_property(&chain, x_max)?
                }
                ChainMode::QuasiCentral { r, len } => check_quasicentral(&chain, r, len, x_max)?,
                ChainMode::CSet { a_max } => check_cset(&chain, &families, a_max, x_max)?,
            };
            let failures = report.translate_failures().count();
            eprintln!(
                "tower: {} probes, {failures} translate failures, {}",
                report.translate.len(),
                if report.pass { "pass" } else { "fail" }
            );
            let pass = report.pass;
            emit_cert(cert::chain_certificate(&chain, &families, mode, &report), out.as_deref())?;
            Ok(if pass { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Vdw { n, colors, len, budget: b, out } => {
            let b = budget(b)?;
            let outcome = vdw_check(n, colors, len, b)?;
            let code = match &outcome.verdict {
                VdwVerdict::Holds => EXIT_OK,
                VdwVerdict::Fails(_) => EXIT_NEGATIVE,
                VdwVerdict::Unknown => {
                    eprintln!("vdw: unknown, budget of {b} exhausted");
                    return Ok(EXIT_BUDGET);
                }
            };
            eprintln!("vdw: verdict={} ({:?}, work {})", code == EXIT_OK, outcome.strategy, outcome.work);
            let c = cert::vdw_certificate(n, colors, len, b, &outcome).expect("decided verdicts certify");
            emit_cert(c, out.as_deref())?;
            Ok(code)
        }
        Cmd::Verify { cert: path, set, family, family2d, chain, n, colors, len } => {
            let c = match Certificate::from_json(&read(&path)?) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("verify: {e}");
                    return Ok(EXIT_CERT_INVALID);
                }
            };
            let supplied = SuppliedInput { set: set.load()?, family, family2d, chain, n, colors, len };
            let given = supplied.canonical(&c)?;
            match cert::verify_certificate(&c, given.as_ref()) {
                Ok(true) => {
                    eprintln!("verify: valid {} certificate", c.kind);
                    Ok(EXIT_OK)
                }
                Ok(false) => {
                    eprintln!("verify: witness does not establish the claim");
                    Ok(EXIT_CERT_INVALID)
                }
                Err(Error::Precondition(m)) => {
                    eprintln!("verify: {m}");
                    Ok(EXIT_BUDGET)
                }
                Err(e) => {
                    eprintln!("verify: {e}");
                    Ok(EXIT_CERT_INVALID)
                }
            }
        }
    }
}

fn analyze(s: &IntSet, len: Option<u64>, r: Option<u64>, out: Option<&Path>) -> Result<i32> {
    let g = gap_profile(s, s.window())?;
    let mut report = json!({
        "window": s.window().to_string(),
        "members": g.members,
        "longest_miss": g.longest_miss(),
        "syndetic_r": g.longest_miss() + 1,
        "longest_run": longest_run(s),
    });
    let mut code = EXIT_OK;
    if let Some(len) = len {
        report["len"] = json!(len);
        report["min_r_for_len"] = json!(min_r_for_len(s, len)?);
        if let Some(r) = r {
            let w = find_pws_witness(s, r, len)?;
            if w.is_none() {
                code = EXIT_NEGATIVE;
            }
            report["r"] = json!(r);
            report["pws_witness"] = serde_json::to_value(w)?;
        }
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&text, out)?;
    Ok(code)
}

/// Inputs given on the `verify` command line.
struct SuppliedInput {
    set: Option<IntSet>,
    family: Vec<PathBuf>,
    family2d: Option<PathBuf>,
    chain: Option<PathBuf>,
    n: Option<u64>,
    colors: Option<u64>,
    len: Option<u64>,
}

impl SuppliedInput {
    fn is_empty(&self) -> bool {
        self.set.is_none()
            && self.family.is_empty()
            && self.family2d.is_none()
            && self.chain.is_none()
            && self.n.is_none()
            && self.colors.is_none()
            && self.len.is_none()
    }

    /// Canonical input for `c`'s kind, or `None` when nothing was supplied.
    fn canonical(&self, c: &Certificate) -> Result<Option<Value>> {
        if self.is_empty() {
            return Ok(None);
        }
        let missing = |what: &str| Error::ParamOutOfRange(format!("verifying a {} certificate needs {what}", c.kind));
        let kind: CertKind = match c.kind.parse() {
            Ok(k) => k,
            Err(_) => return Ok(None),
        };
        let v = match kind {
            CertKind::Ap | CertKind::Pws | CertKind::Pws2d => {
                cert::input_set(self.set.as_ref().ok_or_else(|| missing("--set"))?)
            }
            CertKind::Jset => {
                let [f] = self.family.as_slice() else {
                    return Err(missing("exactly one --family"));
                };
                let set = self.set.as_ref().ok_or_else(|| missing("--set"))?;
                cert::input_set_family(set, &FuncFamily::parse_file(&read(f)?)?)
            }
            CertKind::Jset2d => {
                let set = self.set.as_ref().ok_or_else(|| missing("--set"))?;
                let f = self.family2d.as_ref().ok_or_else(|| missing("--family2d"))?;
                cert::input_set_family2d(set, &FuncFamily2D::parse_file(&read(f)?)?)
            }
            CertKind::Chain => {
                let chain = Chain::parse_file(&read(self.chain.as_ref().ok_or_else(|| missing("--chain"))?)?)?;
                let fams = self.family.iter().map(|p| FuncFamily::parse_file(&read(p)?)).collect::<Result<Vec<_>>>()?;
                cert::input_chain(&chain, &fams)
            }
            CertKind::Vdw => cert::input_vdw(
                self.n.ok_or_else(|| missing("--n"))?,
                self.colors.ok_or_else(|| missing("--colors"))?,
                self.len.ok_or_else(|| missing("--len"))?,
            ),
        };
        Ok(Some(v))
    }
}
