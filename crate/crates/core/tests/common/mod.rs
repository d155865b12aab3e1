//! Structural property checks shared by the property tests and the
//! acceptance runner. Each returns the number of cases examined, or a
//! description of the first counterexample.

#![allow(dead_code)]

use std::collections::HashSet;

use crystalca::bethe::{is_valid_content, period_formula, period_formula_sl2, f_matrix};
use crystalca::rmatrix::check_yang_baxter;
use crystalca::{apply_e, apply_f, factor_swap, rotate, Content, Crystal, CrystalLabel, Engine, Space, SpaceSpec, State, Tableau};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Check = Result<usize, String>;

/// Every `B^{a,j}`, `1 <= n <= 3`, with at most `max_size` elements.
pub fn small_labels(max_size: usize) -> Vec<CrystalLabel> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for a in 1..=n {
            for j in 1.. {
                let label = CrystalLabel::new(n, a, j).unwrap();
                if Crystal::new(label).len() > max_size {
                    break;
                }
                out.push(label);
            }
        }
    }
    out
}

pub fn same_rank_pairs(labels: &[CrystalLabel]) -> Vec<(CrystalLabel, CrystalLabel)> {
    let mut out = Vec::new();
    for &l in labels {
        for &r in labels {
            if l.rank() == r.rank() {
                out.push((l, r));
            }
        }
    }
    out
}

pub fn check_promotion_order(labels: &[CrystalLabel]) -> Check {
    let mut cases = 0;
    for &label in labels {
        for t in Crystal::new(label).elements() {
            let mut u = t.clone();
            for _ in 0..=label.rank() {
                u = u.promotion();
            }
            if &u != t {
                return Err(format!("pr^(n+1) moves {t} in {label}"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn weight_sum(a: &Tableau, b: &Tableau) -> Vec<u32> {
    a.weight().0.iter().zip(&b.weight().0).map(|(x, y)| x + y).collect()
}

/// Totality, bijectivity, weight preservation, `e_i`/`f_i` equivariance
/// (tableau-level tensor rule, `i = 0..=n`), inverse consistency, `H <= 0`
/// and `H = 0` at the highest pair.
pub fn check_r_tables(engine: &Engine, pairs: &[(CrystalLabel, CrystalLabel)]) -> Check {
    pairs
        .par_iter()
        .map(|&(l, r)| -> Check {
            let t = engine.r_table(l, r).map_err(|e| e.to_string())?;
            let back = engine.r_table(r, l).map_err(|e| e.to_string())?;
            let (lc, rc) = (t.left().clone(), t.right().clone());
            if t.entries().len() != lc.len() * rc.len() {
                return Err(format!("{l} (x) {r}: {} entries", t.entries().len()));
            }
            let outputs: HashSet<(u32, u32)> = t.entries().iter().map(|e| (e.out_left, e.out_right)).collect();
            if outputs.len() != t.entries().len() {
                return Err(format!("{l} (x) {r}: not injective"));
            }
            if t.image(0, 0).energy != 0 {
                return Err(format!("{l} (x) {r}: H at highest pair"));
            }
            let n = l.rank();
            let image = |b: &Tableau, c: &Tableau| {
                let e = t.get(b, c).unwrap();
                (vec![e.out_left, e.out_right], e.energy)
            };
            for (bi, b) in lc.elements().iter().enumerate() {
                for (ci, c) in rc.elements().iter().enumerate() {
                    let im = t.image(bi as u32, ci as u32);
                    if im.energy > 0 {
                        return Err(format!("{l} (x) {r}: H({b} . {c}) = {}", im.energy));
                    }
                    let inv = back.image(im.out_left, im.out_right);
                    if (inv.out_left, inv.out_right, inv.energy) != (bi as u32, ci as u32, im.energy) {
                        return Err(format!("{l} (x) {r}: inverse fails at {b} . {c}"));
                    }
                    let (out, _) = image(b, c);
                    if weight_sum(b, c) != weight_sum(&out[0], &out[1]) {
                        return Err(format!("{l} (x) {r}: weight at {b} . {c}"));
                    }
                    let pair = [b.clone(), c.clone()];
                    for i in 0..=n {
                        for (name, op) in [("f", apply_f as fn(usize, &[Tableau]) -> Option<Vec<Tableau>>), ("e", apply_e)] {
                            let lhs = op(i, &pair).map(|q| image(&q[0], &q[1]).0);
                            let rhs = op(i, &out);
                            if lhs != rhs {
                                return Err(format!("{l} (x) {r}: R does not commute with {name}_{i} at {b} . {c}"));
                            }
                        }
                    }
                }
            }
            Ok(t.entries().len())
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

pub fn check_yang_baxter_all(engine: &Engine, labels: &[CrystalLabel]) -> Check {
    let mut triples = Vec::new();
    for &a in labels {
        for &b in labels {
            for &c in labels {
                if a.rank() == b.rank() && b.rank() == c.rank() {
                    triples.push((a, b, c));
                }
            }
        }
    }
    triples
        .par_iter()
        .map(|&(a, b, c)| -> Check {
            match check_yang_baxter(engine, a, b, c).map_err(|e| e.to_string())? {
                None => Ok(1),
                Some(v) => Err(format!("Yang-Baxter fails on {a} (x) {b} (x) {c} at {:?}", v.triple)),
            }
        })
        .try_reduce(|| 0, |x, y| Ok(x + y))
}

pub fn random_state(space: &Space<'_>, rng: &mut ChaCha8Rng) -> Vec<u32> {
    space.factor_crystals().iter().map(|c| rng.gen_range(0..c.len() as u32)).collect()
}

/// Specs for the randomized dynamical checks.
pub fn random_specs() -> Vec<SpaceSpec> {
    [
        (1, "1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1;1,1"),
        (1, "1,3;1,3;1,2;1,4;1,1;1,5;1,4;1,3"),
        (2, "1,1;2,1;1,2;2,2;1,1"),
        (3, "1,2;1,1;1,2;1,1"),
        (3, "2,1;2,1;2,2"),
        (3, "1,1;1,1;1,3;1,1;1,1;1,1;1,2"),
    ]
    .iter()
    .map(|&(n, s)| SpaceSpec::parse(n, s).unwrap())
    .collect()
}

fn small_ops(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|a| (1..=3).map(move |j| (a, j))).collect()
}

type Evolved = Option<(Vec<u32>, u64)>;

fn evolve(space: &Space<'_>, p: &[u32], r: usize, l: usize) -> Result<Evolved, String> {
    let ev = space.evolve_indexed(p, r, l).map_err(|e| e.to_string())?;
    Ok(ev.next.zip(ev.energy))
}

/// `T T' = T' T` (including both vanishing) and conservation of every
/// small `E` under every small `T`, on `count` random states.
pub fn check_commutativity(engine: &Engine, spec: &SpaceSpec, seed: u64, count: usize) -> Check {
    let space = Space::new(engine, spec.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = small_ops(spec.rank());
    let mut cases = 0;
    for _ in 0..count {
        let p = random_state(&space, &mut rng);
        let images: Vec<Evolved> = ops.iter().map(|&(r, l)| evolve(&space, &p, r, l)).collect::<Result<_, _>>()?;
        for (x, &(r, l)) in ops.iter().enumerate() {
            for (y, &(s, k)) in ops.iter().enumerate().skip(x + 1) {
                let one = match &images[y] {
                    Some((q, _)) => evolve(&space, q, r, l)?.map(|v| v.0),
                    None => None,
                };
                let two = match &images[x] {
                    Some((q, _)) => evolve(&space, q, s, k)?.map(|v| v.0),
                    None => None,
                };
                if one != two {
                    return Err(format!("T({r},{l}) and T({s},{k}) do not commute on {}", space.state(&p)));
                }
                cases += 1;
            }
        }
        for (x, &(r, l)) in ops.iter().enumerate() {
            let Some((q, _)) = &images[x] else { continue };
            for (y, &(s, k)) in ops.iter().enumerate() {
                let before = images[y].as_ref().map(|v| v.1);
                let after = evolve(&space, q, s, k)?.map(|v| v.1);
                if before.is_some() && after.is_some() && before != after {
                    return Err(format!("E({s},{k}) changes under T({r},{l}) on {}", space.state(&p)));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// `w T = T w`, `E(w p) = E(p)` and `T R_j = R_j T`, `T pi = pi T` for
/// `w` in `S_0..S_n, pr`; contents are `w`-invariant on evolvable states.
pub fn check_weyl(engine: &Engine, spec: &SpaceSpec, states: &[State]) -> Check {
    let space = Space::new(engine, spec.clone());
    let n = spec.rank();
    let ops = small_ops(n);
    let mut cases = 0;
    for p in states {
        let idx = space.index(p).map_err(|e| e.to_string())?;
        let mut movers: Vec<(String, State)> = (0..=n)
            .map(|i| (format!("S_{i}"), space.state(&space.weyl_indexed(i, &idx))))
            .collect();
        movers.push(("pr".into(), space.state(&space.promotion_indexed(&idx))));
        let apply = |name: &str, q: &State| -> Result<State, String> {
            let qi = space.index(q).map_err(|e| e.to_string())?;
            Ok(match name {
                "pr" => space.state(&space.promotion_indexed(&qi)),
                s => space.state(&space.weyl_indexed(s[2..].parse().unwrap(), &qi)),
            })
        };
        for &(r, l) in &ops {
            let tp = space.time_evolution(p, r, l).map_err(|e| e.to_string())?;
            for (name, wp) in &movers {
                let twp = space.time_evolution(wp, r, l).map_err(|e| e.to_string())?;
                let wtp = tp.next.as_ref().map(|q| apply(name, q)).transpose()?;
                if twp.next != wtp || twp.energy != tp.energy {
                    return Err(format!("{name} and T({r},{l}) disagree on {p}"));
                }
                cases += 1;
            }
            for j in 1..spec.len() {
                let rp = factor_swap(engine, j, p).map_err(|e| e.to_string())?;
                let rspace = Space::new(engine, rp.spec());
                let trp = rspace.time_evolution(&rp, r, l).map_err(|e| e.to_string())?;
                let rtp = tp.next.as_ref().map(|q| factor_swap(engine, j, q)).transpose().map_err(|e| e.to_string())?;
                if trp.next != rtp || trp.energy != tp.energy {
                    return Err(format!("R_{j} and T({r},{l}) disagree on {p}"));
                }
                cases += 1;
            }
            let pp = rotate(p);
            let rspace = Space::new(engine, pp.spec());
            let tpp = rspace.time_evolution(&pp, r, l).map_err(|e| e.to_string())?;
            if tpp.next != tp.next.as_ref().map(rotate) || tpp.energy != tp.energy {
                return Err(format!("rotation and T({r},{l}) disagree on {p}"));
            }
            cases += 1;
        }
        if let Ok(m) = space.soliton_content(p) {
            for (name, wp) in &movers {
                if space.soliton_content(wp).map_err(|e| e.to_string())? != m {
                    return Err(format!("{name} changes the content of {p}"));
                }
            }
        }
    }
    Ok(cases)
}

/// `R_j R_{j+1} R_j = R_{j+1} R_j R_{j+1}` and `R_j^2 = id` on states.
pub fn check_braid(engine: &Engine, spec: &SpaceSpec, states: &[State]) -> Check {
    let mut cases = 0;
    for p in states {
        let r = |j: usize, q: &State| factor_swap(engine, j, q).map_err(|e| e.to_string());
        for j in 1..spec.len() {
            if r(j, &r(j, p)?)? != *p {
                return Err(format!("R_{j}^2 moves {p}"));
            }
            if j + 1 < spec.len() {
                let lhs = r(j, &r(j + 1, &r(j, p)?)?)?;
                let rhs = r(j + 1, &r(j, &r(j + 1, p)?)?)?;
                if lhs != rhs {
                    return Err(format!("braid relation fails for R_{j} on {p}"));
                }
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Injectivity and weight preservation of each small `T` on the states of
/// `B` whose image is again evolvable.
pub fn check_injectivity(engine: &Engine, spec: &SpaceSpec) -> Check {
    let space = Space::new(engine, spec.clone());
    let sizes: Vec<u32> = space.factor_crystals().iter().map(|c| c.len() as u32).collect();
    let total: u64 = sizes.iter().map(|&s| s as u64).product();
    let mut cases = 0;
    for (r, l) in small_ops(spec.rank()) {
        let mut seen = HashSet::new();
        for k in 0..total {
            let mut rest = k;
            let p: Vec<u32> = sizes
                .iter()
                .rev()
                .map(|&s| {
                    let d = (rest % s as u64) as u32;
                    rest /= s as u64;
                    d
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            if let Some((q, _)) = evolve(&space, &p, r, l)? {
                // two states can share an image that is itself not evolvable
                if evolve(&space, &q, r, l)?.is_none() {
                    continue;
                }
                if space.weight_indexed(&q) != space.weight_indexed(&p) {
                    return Err(format!("T({r},{l}) changes the weight of {}", space.state(&p)));
                }
                if !seen.insert(q) {
                    return Err(format!("T({r},{l}) is not injective on {spec}"));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn partitions(max: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for j in (1..=cap.min(rest)).rev() {
            cur.push(j);
            go(rest - j, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max, max, &mut Vec::new(), &mut out);
    out
}

/// Closed sl2 formula against the general one on every valid content of
/// `(B^{1,1})^L`, `L <= max_len`, with `det F > 0`.
pub fn check_sl2_formula(max_len: usize) -> Check {
    let mut cases = 0;
    for big_l in 1..=max_len {
        let spec = SpaceSpec::new(1, &vec![(1, 1); big_l]).unwrap();
        for part in partitions(big_l / 2) {
            let m = Content::from_partitions(1, &[part.clone()]).unwrap();
            if !is_valid_content(&spec, &m) {
                continue;
            }
            if !f_matrix(&spec, &m).det().is_positive() {
                return Err(format!("det F <= 0 for {m} at L = {big_l}"));
            }
            for l in 1..=part.first().copied().unwrap_or(0) + 1 {
                let general = period_formula(&spec, &m, 1, l).map_err(|e| e.to_string())?.period;
                let closed = period_formula_sl2(&spec, &m, l).map_err(|e| e.to_string())?;
                if general != closed {
                    return Err(format!("L = {big_l}, m = {m}, l = {l}: general {general}, closed {closed}"));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

pub fn grid_states(space: &Space<'_>) -> Vec<State> {
    crystalca::reference::GRID.iter().flatten().map(|s| space.parse_state(s).unwrap()).collect()
}

pub fn random_states(space: &Space<'_>, seed: u64, count: usize) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| space.state(&random_state(space, &mut rng))).collect()
}
