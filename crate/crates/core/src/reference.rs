//! Published reference tables and the `verify` suites that replay them.

use std::collections::BTreeSet;
use std::fmt;

use crate::automaton::{Space, SpaceSpec, State};
use crate::bethe::format_ratio;
use crate::content::Content;
use crate::engine::Engine;
use crate::error::Result;
use crate::lab::{classify, verify_periods, PeriodVerdict, DEFAULT_STATE_BOUND};

pub struct PeriodTable {
    pub name: &'static str,
    pub rank: usize,
    pub space: &'static str,
    pub state: &'static str,
    pub content: &'static str,
    /// `(r, l, LCM entries after the leading 1, period)`.
    pub rows: &'static [(usize, usize, &'static [&'static str], u64)],
}

pub const PERIOD_TABLES: [PeriodTable; 4] = [
    PeriodTable {
        name: "sl2 homogeneous",
        rank: 1,
        space: "1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1",
        state: "1.2.2.1.1.2.1.1.2.2.2.2.1",
        content: "3,2,1",
        rows: &[
            (1, 1, &["13", "13", "13"], 13),
            (1, 2, &["91/3", "91/16", "91/16"], 91),
            (1, 3, &["91", "273/16", "273/107"], 273),
        ],
    },
    PeriodTable {
        name: "sl2 inhomogeneous",
        rank: 1,
        space: "1,3;1,3;1,2;1,4;1,1;1,5;1,4;1,3",
        state: "122.112.12.1222.2.11111.1122.111",
        content: "4,3,2,1",
        rows: &[
            (1, 1, &["2"], 2),
            (1, 2, &["7", "7/2", "21", "42"], 42),
            (1, 3, &["14", "7", "21/4", "21/2"], 42),
            (1, 4, &["21", "21/2", "63/8", "126/29"], 126),
        ],
    },
    PeriodTable {
        name: "A3 single rows",
        rank: 3,
        space: "1,3;1,2;1,1;1,3;1,2;1,1;1,2",
        state: "134.34.1.134.23.1.13",
        content: "4,3,2/3,1/1",
        rows: &[
            (1, 1, &["380/39", "95/6", "95/6", "380/31", "380/27", "380/29"], 380),
            (1, 2, &["190/39", "95/12", "95/12", "190/31", "190/27", "190/29"], 190),
            (2, 1, &["190/13", "95/4", "95/4", "190/137", "190/9", "190/73"], 190),
            (2, 2, &["76/5", "38/3", "38/3", "76/41", "76/21", "76/31"], 76),
            (2, 3, &["95/6", "95/11", "95/11", "95/34", "95/48", "95/41"], 95),
            (3, 1, &["380/13", "95/2", "95/2", "380/137", "380/9", "380/263"], 380),
        ],
    },
    PeriodTable {
        name: "A3 rectangles",
        rank: 3,
        space: "1,3;3,2;2,2;1,1",
        state: "233.12/23/34.11/34.1",
        content: "3/3/2",
        rows: &[
            (1, 1, &["11/2", "11", "22"], 22),
            (1, 2, &["11/4", "11/2", "11"], 11),
            (1, 3, &["11/6", "11/3", "22/3"], 22),
            (2, 1, &["11", "33/7", "66/7"], 66),
            (2, 2, &["11/2", "33/14", "33/7"], 33),
            (2, 3, &["11/3", "11/7", "22/7"], 22),
            (3, 2, &["11", "33/7", "33/20"], 33),
        ],
    },
];

pub struct ClassificationTable {
    pub name: &'static str,
    pub rank: usize,
    pub space: &'static str,
    pub states: u64,
    pub evolvable: u64,
    /// `(content, lambda, |W lambda|, |P|, Omega, starred)`.
    pub rows: &'static [(&'static str, &'static str, u64, u64, u64, bool)],
}

pub const CLASSIFICATION_TABLES: [ClassificationTable; 2] = [
    ClassificationTable {
        name: "B12.B11.B12.B11",
        rank: 3,
        space: "1,2;1,1;1,2;1,1",
        states: 1600,
        evolvable: 824,
        rows: &[
            ("-/-/-", "(6,0,0,0)", 4, 4, 1, false),
            ("1/-/-", "(5,1,0,0)", 12, 48, 4, false),
            ("1,1/-/-", "(4,2,0,0)", 12, 24, 2, false),
            ("2/-/-", "(4,2,0,0)", 12, 72, 6, false),
            ("2,1/-/-", "(3,3,0,0)", 6, 24, 4, false),
            ("3/-/-", "(3,3,0,0)", 6, 36, 6, false),
            ("1,1/1/-", "(4,1,1,0)", 12, 96, 8, false),
            ("2,2/2/-", "(2,2,2,0)", 4, 24, 12, true),
            ("2,1/1/-", "(3,2,1,0)", 24, 432, 18, false),
            ("1,1,1/1,1/1", "(3,1,1,1)", 4, 16, 4, false),
            ("2,1,1/1,1/1", "(2,2,1,1)", 6, 48, 8, false),
        ],
    },
    ClassificationTable {
        name: "B21.B21.B22",
        rank: 3,
        space: "2,1;2,1;2,2",
        states: 720,
        evolvable: 518,
        rows: &[
            ("-/-/-", "(4,4,0,0)", 6, 6, 1, false),
            ("-/1/-", "(4,3,1,0)", 24, 72, 3, false),
            ("-/1,1/1", "(4,2,1,1)", 12, 36, 3, false),
            ("-/2/-", "(4,2,2,0)", 12, 48, 4, false),
            ("1/1,1/-", "(3,3,2,0)", 12, 36, 3, false),
            ("1/1,1/1", "(3,3,1,1)", 6, 72, 12, false),
            ("1/2,1/1", "(3,2,2,1)", 12, 240, 20, false),
            ("2/2,2/2", "(2,2,2,2)", 1, 8, 32, true),
        ],
    },
];

/// Fixed-weight members of `P(m)` in the first classification space.
pub const LISTINGS: [(&str, &[&str]); 2] = [
    ("1,1,1/1,1/1", &["11.2.13.4", "12.3.14.1", "13.4.11.2", "14.1.12.3"]),
    (
        "2,1,1/1,1/1",
        &["11.2.23.4", "12.2.13.4", "12.3.24.1", "13.4.12.2", "14.1.22.3", "22.3.14.1", "23.4.11.2", "24.1.12.3"],
    ),
];

pub const GRID_RANK: usize = 3;
pub const GRID_SPACE: &str = "1,1;1,1;1,3;1,1;1,1;1,1;1,2";
pub const GRID_CONTENT: &str = "3,1,1,1/2,1/1";
/// Rows are successive times; columns are `p`, `S_0 p`, `S_1 S_0 p`.
pub const GRID: [[&str; 3]; 4] = [
    ["2.1.233.4.1.2.12", "2.4.233.4.1.2.24", "1.4.133.4.1.2.14"],
    ["1.2.123.3.4.1.22", "4.2.234.3.4.1.22", "4.1.134.3.4.1.12"],
    ["1.2.112.3.2.3.24", "1.2.244.3.2.3.24", "1.2.144.3.1.3.14"],
    ["2.3.112.4.2.3.12", "2.3.244.4.2.3.12", "2.3.144.4.1.3.11"],
];
/// `T^{(r)}_l` taking row `k` to row `k + 1`.
pub const GRID_STEPS: [(usize, usize); 3] = [(1, 2), (2, 1), (3, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Grid,
    Periods,
    Classification,
    Listings,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grid" => Ok(Suite::Grid),
            "periods" => Ok(Suite::Periods),
            "classification" => Ok(Suite::Classification),
            "listings" => Ok(Suite::Listings),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite '{s}' (grid, periods, classification, listings, all)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.passed || self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {}", self.name, self.detail)
        }
    }
}

pub fn run_suite(engine: &Engine, suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Grid => check_grid(engine)?,
        Suite::Periods => check_periods(engine)?,
        Suite::Classification => check_classifications(engine)?,
        Suite::Listings => check_listings(engine)?,
        Suite::All => {
            let mut out = check_grid(engine)?;
            out.extend(check_periods(engine)?);
            out.extend(check_classifications(engine)?);
            out.extend(check_listings(engine)?);
            out
        }
    })
}

pub fn check_grid(engine: &Engine) -> Result<Vec<Check>> {
    let space = Space::new(engine, SpaceSpec::parse(GRID_RANK, GRID_SPACE)?);
    let grid: Vec<Vec<State>> =
        GRID.iter().map(|row| row.iter().map(|s| space.parse_state(s)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut mismatches = Vec::new();
    for (k, &(r, l)) in GRID_STEPS.iter().enumerate() {
        for c in 0..3 {
            let next = space.time_evolution(&grid[k][c], r, l)?.next;
            if next.as_ref() != Some(&grid[k + 1][c]) {
                mismatches.push(format!("T({r},{l}) of {}", grid[k][c]));
            }
        }
    }
    out.push(Check::new("grid time steps", mismatches.is_empty(), mismatches.join("; ")));
    mismatches.clear();
    for row in &grid {
        for (c, i) in [(0, 0), (1, 1)] {
            let got = space.weyl_s(i, &row[c])?;
            if got != row[c + 1] {
                mismatches.push(format!("S_{i}({}) = {got}", row[c]));
            }
        }
    }
    out.push(Check::new("grid Weyl images", mismatches.is_empty(), mismatches.join("; ")));
    let m = Content::parse(GRID_RANK, GRID_CONTENT)?;
    let bad: Vec<String> = grid
        .iter()
        .flatten()
        .filter(|p| space.soliton_content(p).ok().as_ref() != Some(&m))
        .map(|p| p.to_string())
        .collect();
    out.push(Check::new(format!("grid content {}", m.tuple_notation()), bad.is_empty(), bad.join(", ")));
    Ok(out)
}

fn sorted(v: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = v.into_iter().collect();
    v.sort();
    v
}

pub fn check_periods(engine: &Engine) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for table in &PERIOD_TABLES {
        let space = Space::new(engine, SpaceSpec::parse(table.rank, table.space)?);
        let state = space.parse_state(table.state)?;
        let m = Content::parse(table.rank, table.content)?;
        let got = space.soliton_content(&state)?;
        out.push(Check::new(
            format!("periods {}: content", table.name),
            got == m,
            if got == m { String::new() } else { format!("found {got}") },
        ));
        let pairs: Vec<(usize, usize)> = table.rows.iter().map(|&(r, l, _, _)| (r, l)).collect();
        let rows = verify_periods(&space, &state, &pairs, 0)?;
        for (row, &(r, l, ratios, period)) in rows.iter().zip(table.rows) {
            let want = sorted(ratios.iter().map(|s| s.to_string()));
            let have = sorted(row.ratios.iter().map(format_ratio));
            let mut problems = Vec::new();
            if want != have {
                problems.push(format!("ratios {have:?}"));
            }
            if row.predicted != period.into() {
                problems.push(format!("predicted {}", row.predicted));
            }
            if row.measured != Some(period) || row.verdict != PeriodVerdict::Equal {
                problems.push(format!("measured {:?}", row.measured));
            }
            out.push(Check::new(
                format!("periods {}: T({r},{l}) = {period}", table.name),
                problems.is_empty(),
                problems.join(", "),
            ));
        }
    }
    Ok(out)
}

pub fn check_classifications(engine: &Engine) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for table in &CLASSIFICATION_TABLES {
        let space = Space::new(engine, SpaceSpec::parse(table.rank, table.space)?);
        let c = classify(&space, DEFAULT_STATE_BOUND)?;
        out.push(Check::new(
            format!("classification {}: {} states, {} evolvable", table.name, table.states, table.evolvable),
            c.total == table.states && c.evolvable == table.evolvable,
            format!("found {} / {}", c.total, c.evolvable),
        ));
        let want: BTreeSet<(String, String, u64, u64, String)> = table
            .rows
            .iter()
            .map(|&(m, lam, o, p, om, _)| (m.to_string(), lam.to_string(), o, p, om.to_string()))
            .collect();
        let have: BTreeSet<(String, String, u64, u64, String)> = c
            .rows
            .iter()
            .map(|r| (r.content.to_string(), r.lambda.to_string(), r.orbit, r.population, r.omega.to_string()))
            .collect();
        let missing: Vec<String> = want.difference(&have).map(|r| format!("{r:?}")).collect();
        let extra: Vec<String> = have.difference(&want).map(|r| format!("{r:?}")).collect();
        out.push(Check::new(
            format!("classification {}: {} rows", table.name, table.rows.len()),
            missing.is_empty() && extra.is_empty(),
            format!("missing {missing:?} extra {extra:?}"),
        ));
        let mut problems = Vec::new();
        for &(m, _, _, _, _, starred) in table.rows {
            let m = Content::parse(table.rank, m)?;
            let Some(row) = c.row(&m) else { continue };
            if row.closed == starred {
                problems.push(format!("{} closed = {}", m.tuple_notation(), row.closed));
            }
            if !row.weights_ok {
                problems.push(format!("{} weights", m.tuple_notation()));
            }
            if if starred { !row.divisor_ok } else { !row.ratio_ok } {
                problems.push(format!("{} Omega relation", m.tuple_notation()));
            }
        }
        out.push(Check::new(
            format!("classification {}: closure, weights, Omega relation", table.name),
            problems.is_empty(),
            problems.join(", "),
        ));
    }
    Ok(out)
}

pub fn check_listings(engine: &Engine) -> Result<Vec<Check>> {
    let table = &CLASSIFICATION_TABLES[0];
    let space = Space::new(engine, SpaceSpec::parse(table.rank, table.space)?);
    let c = classify(&space, DEFAULT_STATE_BOUND)?;
    let mut out = Vec::new();
    for (m, states) in LISTINGS {
        let m = Content::parse(table.rank, m)?;
        let want: BTreeSet<String> = states.iter().map(|s| s.to_string()).collect();
        let have: BTreeSet<String> = c.fixed_weight_states(&space, &m).iter().map(|p| p.to_string()).collect();
        out.push(Check::new(
            format!("listing {} ({} states)", m.tuple_notation(), want.len()),
            want == have,
            if want == have { String::new() } else { format!("found {have:?}") },
        ));
    }
    Ok(out)
}
