//! Command-line front end; the `crystalca` binary is a thin wrapper.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::automaton::{factor_swap, rotate, Space, SpaceSpec, State};
use crate::bethe::{f_matrix, lambda_weight, omega, orbit_size, vacancy_numbers};
use crate::content::Content;
use crate::crystal::{CrystalLabel, Tableau};
use crate::engine::{CacheManifest, Engine};
use crate::error::{Error, Result};
use crate::lab::{
    classify, completeness_diagnostic, render_classification, render_completeness, render_periods, verify_periods,
    OutputFormat, PeriodVerdict, DEFAULT_STATE_BOUND,
};
use crate::reference::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "crystalca", version, about = "Periodic A(1)n soliton cellular automata and their Bethe-ansatz counts")]
struct Cli {
    /// Directory for persisted R tables (overrides $CRYSTALCA_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// n of A(1)n.
    #[arg(long)]
    rank: usize,
    /// Factors `r,l` separated by ';', e.g. "1,2;1,1".
    #[arg(long)]
    space: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply an operator repeatedly and print every iterate.
    Evolve {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        state: String,
        /// T(r,l), S(i), pr, prinv, R(j) or rot.
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
    /// Predicted and measured periods under T(r,l).
    Period {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        state: String,
        /// Pairs `r,l` separated by ';'; default all r <= n, l <= max l_i.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
    },
    /// Soliton content of a state.
    Content {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        state: String,
    },
    /// Classify every state of the space by content.
    Classify {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_STATE_BOUND)]
        bound: u128,
    },
    /// Vacancy numbers, det F, Omega and lambda of a content.
    Omega {
        #[command(flatten)]
        space: SpaceArgs,
        /// Colors separated by '/', rows by ',', '-' for empty: "2,1/1/-".
        #[arg(long)]
        content: String,
    },
    /// Print the combinatorial R table of B^{a,j} (x) B^{b,k}.
    Rtable {
        #[arg(long)]
        rank: usize,
        /// `a,j`.
        #[arg(long)]
        left: String,
        /// `b,k`.
        #[arg(long)]
        right: String,
    },
    /// Truncated completeness sums against the character of B.
    Completeness {
        #[command(flatten)]
        space: SpaceArgs,
        /// Boxes per color; default the total boxes of B.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Replay the published tables.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

fn open_space<'e>(engine: &'e Engine, args: &SpaceArgs) -> Result<Space<'e>> {
    Ok(Space::new(engine, SpaceSpec::parse(args.rank, &args.space)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    T(usize, usize),
    S(usize),
    Pr,
    PrInv,
    R(usize),
    Rot,
}

fn parse_op(text: &str) -> Result<Op> {
    let t = text.trim();
    let args = |name: &str| -> Result<Vec<usize>> {
        let inner = t[name.len()..]
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(name.len(), format!("expected {name}(...)")))?;
        let mut pos = name.len() + 1;
        inner
            .split(',')
            .map(|x| {
                let v = x.trim().parse().map_err(|_| Error::parse(pos, format!("bad integer '{x}'")));
                pos += x.len() + 1;
                v
            })
            .collect()
    };
    let arity = |v: Vec<usize>, k: usize| -> Result<Vec<usize>> {
        if v.len() == k {
            Ok(v)
        } else {
            Err(Error::parse(0, format!("{t} takes {k} argument(s)")))
        }
    };
    match t {
        "pr" => Ok(Op::Pr),
        "prinv" => Ok(Op::PrInv),
        "rot" => Ok(Op::Rot),
        _ if t.starts_with('T') => arity(args("T")?, 2).map(|v| Op::T(v[0], v[1])),
        _ if t.starts_with('S') => arity(args("S")?, 1).map(|v| Op::S(v[0])),
        _ if t.starts_with('R') => arity(args("R")?, 1).map(|v| Op::R(v[0])),
        _ => Err(Error::parse(0, format!("unknown operator '{t}'"))),
    }
}

fn apply_op(space: &Space<'_>, op: Op, p: &State) -> Result<Option<State>> {
    Ok(match op {
        Op::T(r, l) => space.time_evolution(p, r, l)?.next,
        Op::S(i) => Some(space.weyl_s(i, p)?),
        Op::Pr => Some(space.promotion_state(p)?),
        Op::PrInv => Some(space.state(&space.demotion_indexed(&space.index(p)?))),
        Op::R(j) => Some(factor_swap(space.engine(), j, p)?),
        Op::Rot => Some(rotate(p)),
    })
}

fn parse_pair(text: &str, offset: usize) -> Result<(usize, usize)> {
    let (a, b) = text.split_once(',').ok_or_else(|| Error::parse(offset, format!("expected 'r,l', got '{text}'")))?;
    let num = |s: &str, at: usize| s.trim().parse().map_err(|_| Error::parse(at, format!("bad integer '{s}'")));
    Ok((num(a, offset)?, num(b, offset + a.len() + 1)?))
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut pos = 0;
    text.split(';')
        .map(|item| {
            let v = parse_pair(item, pos);
            pos += item.len() + 1;
            v
        })
        .collect()
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::InvalidLabel { .. }
            | Error::NotSemistandard { .. }
            | Error::RankMismatch { .. }
            | Error::Precondition(_)
    )
}

fn run(cli: Cli) -> Result<i32> {
    let engine = Engine::with_cache(CacheManifest::resolve(cli.cache_dir.as_deref()));
    match cli.command {
        Command::Evolve { space, state, op, steps } => {
            let space = open_space(&engine, &space)?;
            let op = parse_op(&op)?;
            let mut p = space.parse_state(&state)?;
            for _ in 0..steps {
                match apply_op(&space, op, &p)? {
                    Some(q) => {
                        println!("{q}");
                        p = q;
                    }
                    None => {
                        println!("0");
                        break;
                    }
                }
            }
        }
        Command::Period { space, state, pairs, cap, format } => {
            let space = open_space(&engine, &space)?;
            let p = space.parse_state(&state)?;
            let pairs = match pairs {
                Some(text) => parse_pairs(&text)?,
                None => {
                    let lmax = space.spec().factors().iter().map(|f| f.cols()).max().unwrap_or(1);
                    (1..=space.rank()).flat_map(|r| (1..=lmax).map(move |l| (r, l))).collect()
                }
            };
            let rows = verify_periods(&space, &p, &pairs, cap)?;
            print!("{}", render_periods(&rows, format));
            if rows.iter().any(|r| matches!(r.verdict, PeriodVerdict::Violation | PeriodVerdict::NotReturned)) {
                return Ok(EXIT_FAILED);
            }
        }
        Command::Content { space, state } => {
            let space = open_space(&engine, &space)?;
            let m = space.soliton_content(&space.parse_state(&state)?)?;
            println!("{m}\t{}", m.tuple_notation());
        }
        Command::Classify { space, format, bound } => {
            let space = open_space(&engine, &space)?;
            print!("{}", render_classification(&classify(&space, bound)?, format));
        }
        Command::Omega { space, content } => {
            let spec = SpaceSpec::parse(space.rank, &space.space)?;
            let m = Content::parse(space.rank, &content)?;
            let v = vacancy_numbers(&spec, &m);
            println!("content {}", m.tuple_notation());
            for ((a, j), p) in &v.values {
                println!("p({a},{j}) = {p}");
            }
            let inf: Vec<String> = v.infinity.iter().map(|x| x.to_string()).collect();
            println!("p(inf) = ({})", inf.join(","));
            println!("det F = {}", f_matrix(&spec, &m).det());
            println!("Omega = {}", omega(&spec, &m)?);
            match lambda_weight(&spec, &m) {
                Ok(w) => println!("lambda = {w}, |W lambda| = {}", orbit_size(&w)),
                Err(e) => println!("lambda: {e}"),
            }
        }
        Command::Rtable { rank, left, right } => {
            let (a, j) = parse_pair(&left, 0)?;
            let (b, k) = parse_pair(&right, 0)?;
            let (l, r) = (CrystalLabel::new(rank, a, j)?, CrystalLabel::new(rank, b, k)?);
            let table = engine.r_table(l, r)?;
            let lc = table.left();
            let rc = table.right();
            println!("{l} (x) {r} -> {r} (x) {l}");
            for (bi, bt) in lc.elements().iter().enumerate() {
                for (ci, ct) in rc.elements().iter().enumerate() {
                    let im = table.image(bi as u32, ci as u32);
                    let (nl, nr): (&Tableau, &Tableau) = (rc.element(im.out_left), lc.element(im.out_right));
                    println!("{bt} . {ct} -> {nl} . {nr}  H = {}", im.energy);
                }
            }
        }
        Command::Completeness { space, bound } => {
            let space = open_space(&engine, &space)?;
            let bound = bound.unwrap_or(space.spec().total_boxes());
            print!("{}", render_completeness(&completeness_diagnostic(&space, bound)?));
        }
        Command::Verify { suite } => {
            let checks = run_suite(&engine, suite)?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                return Ok(EXIT_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parse `argv` (program name first) and run; returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_parse() {
        assert_eq!(parse_op("T(1,2)").unwrap(), Op::T(1, 2));
        assert_eq!(parse_op("S(0)").unwrap(), Op::S(0));
        assert_eq!(parse_op("R(3)").unwrap(), Op::R(3));
        assert_eq!(parse_op("pr").unwrap(), Op::Pr);
        assert!(matches!(parse_op("T(1,x)"), Err(Error::Parse { pos: 4, .. })));
        assert!(parse_op("T(1)").is_err());
        assert!(parse_op("Q").is_err());
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pairs("1,1;2,3").unwrap(), vec![(1, 1), (2, 3)]);
        assert!(matches!(parse_pairs("1,1;2,y"), Err(Error::Parse { pos: 6, .. })));
    }
}
