//! Exit criteria. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use mw_core::canon::{canonicalize, AsMode};
use mw_core::engine::Engine;
use mw_core::enumerate::Space;
use mw_core::exactla::{rank, rank_modp};
use mw_core::graph::{theta, y_graph, Graph};
use mw_core::hopf::{coproduct, deframe, deframe_vec, product, theta_normalize, ws_eval, ws_product, WeightSystem};
use mw_core::vector::{GraphVector, TensorVector};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dimensions from the published table: (degree, total, primitive).
const PUBLISHED: [(usize, usize, usize); 5] = [(0, 1, 1), (3, 1, 1), (6, 2, 1), (9, 3, 1), (12, 5, 2)];

const PRIMES: [u64; 2] = [1_048_583, 2_147_483_647];

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Number of multisets of generators with total degree `m`, where `gens[d]`
/// generators sit in degree `d`. Counted by direct recursion over degrees.
fn multiset_count(gens: &[usize], m: usize) -> usize {
    fn go(gens: &[usize], d: usize, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        if d >= gens.len() || d > left {
            return 0;
        }
        // choose how many generators of degree d to use, with repetition
        let mut total = 0;
        let mut k = 0;
        while k * d <= left {
            total += multichoose(gens[d], k) * go(gens, d + 1, left - k * d);
            k += 1;
        }
        total
    }
    fn multichoose(n: usize, k: usize) -> usize {
        if k == 0 {
            return 1;
        }
        if n == 0 {
            return 0;
        }
        (1..=k).fold(1, |acc, i| acc * (n + i - 1) / i)
    }
    go(gens, 1, m)
}

fn a1(engine: &Engine) -> Outcome {
    let mut got = Vec::new();
    for &(m, total, prim) in &PUBLISHED[..4] {
        let d = engine.quotient_dim(m, Space::Cmc, false).map_err(|e| e.to_string())?;
        got.push(format!("{m}:{d}"));
        ensure(d == total, || format!("dim in degree {m} is {d}, expected {total}"))?;
        if m > 0 {
            let p = engine.quotient_dim(m, Space::Cmc, true).map_err(|e| e.to_string())?;
            ensure(p == prim, || format!("primitive dim in degree {m} is {p}, expected {prim}"))?;
        }
    }
    Ok(format!("dims {} and primitive dims 1,1,1 at degrees 3,6,9", got.join(" ")))
}

fn a2(engine: &Engine) -> Outcome {
    let dim = engine.quotient_dim(12, Space::Cmc, false).map_err(|e| e.to_string())?;
    let prim = engine.quotient_dim(12, Space::Cmc, true).map_err(|e| e.to_string())?;
    let mut gens = vec![0; 13];
    for (m, g) in gens.iter_mut().enumerate().skip(1) {
        *g = engine.quotient_dim(m, Space::Cmc, true).map_err(|e| e.to_string())?;
    }
    let predicted = multiset_count(&gens, 12);
    ensure(dim == predicted, || format!("dim {dim} differs from symmetric-algebra prediction {predicted}"))?;
    let (_, pub_total, pub_prim) = PUBLISHED[4];
    let verdict = |ours: usize, theirs: usize| if ours == theirs { "agrees" } else { "DISAGREES" };
    Ok(format!(
        "degree 12: dim {dim} = prediction {predicted}; primitive dim {prim}; published total {pub_total} ({}), published primitive {pub_prim} ({})",
        verdict(dim, pub_total),
        verdict(prim, pub_prim)
    ))
}

fn a3(engine: &Engine) -> Outcome {
    let mut bad = Vec::new();
    for m in (1..=12).filter(|m| m % 3 != 0) {
        let d = engine.quotient_dim(m, Space::Cmc, false).map_err(|e| e.to_string())?;
        if d != 0 {
            bad.push(format!("cmc/(AS,IHX) deg {m}: dim {d}"));
        }
        // ECMC modulo AS and IS only: the catalog itself spans the quotient.
        let classes = engine.enum_ecmc(m).map_err(|e| e.to_string())?.len();
        if classes != 0 {
            let with_ihx = engine.quotient_dim(m, Space::Ecmc, false).map_err(|e| e.to_string())?;
            bad.push(format!("ecmc/(AS,IS) deg {m}: dim {classes} (also modulo IHX: {with_ihx})"));
        }
    }
    ensure(bad.is_empty(), || format!("nonzero off multiples of 3: {}", bad.join("; ")))?;
    Ok("all degrees n <= 12 with 3 not dividing n vanish in both quotients".into())
}

fn triple_from(t: &TensorVector, left_first: bool, mode: AsMode) -> BTreeMap<[String; 3], BigRational> {
    let mut out: BTreeMap<[String; 3], BigRational> = BTreeMap::new();
    for (l, r, c) in t.iter() {
        let split = if left_first { l } else { r };
        for (a, b, c2) in coproduct(&split.parse::<Graph>().unwrap(), mode).iter() {
            let key = if left_first { [a.to_string(), b.to_string(), r.to_string()] } else { [l.to_string(), a.to_string(), b.to_string()] };
            *out.entry(key).or_insert_with(BigRational::zero) += c * c2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn a4(engine: &Engine) -> Outcome {
    let mut checked = 0usize;
    for space in [Space::Cmc, Space::Ecmc] {
        let mode = space.default_mode();
        let cats: Vec<_> = (0..=9).map(|m| engine.catalog(m, space).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        for cat in &cats {
            for i in 0..cat.len() {
                let g = cat.graph(i);
                let d = coproduct(&g, mode);
                ensure(d == d.swapped(), || format!("not cocommutative on {}", cat.classes[i]))?;
                ensure(triple_from(&d, true, mode) == triple_from(&d, false, mode), || {
                    format!("not coassociative on {}", cat.classes[i])
                })?;
                let mut prim = TensorVector::new();
                if !g.is_empty() {
                    prim.add(&cat.classes[i], "deg=0;v=;p=", &BigRational::one());
                    prim.add("deg=0;v=;p=", &cat.classes[i], &BigRational::one());
                }
                let is_prim = !g.is_empty() && d == prim;
                ensure(is_prim == g.is_connected(), || format!("primitive={is_prim} on {}", cat.classes[i]))?;
                checked += 1;
            }
        }
        for (a, ca) in cats.iter().enumerate() {
            for cb in cats.iter().take(10 - a) {
                for x in &ca.classes {
                    for y in &cb.classes {
                        let (vx, vy) = (GraphVector::from_key(x), GraphVector::from_key(y));
                        let xy = product(&vx, &vy, mode);
                        let mut lhs = TensorVector::new();
                        for (k, c) in xy.iter() {
                            lhs.add_scaled(&coproduct(&k.parse().unwrap(), mode), c);
                        }
                        let rhs = mw_core::hopf::tensor_product(
                            &coproduct(&x.parse().unwrap(), mode),
                            &coproduct(&y.parse().unwrap(), mode),
                            mode,
                        );
                        ensure(lhs == rhs, || format!("coproduct not multiplicative on {x} * {y}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} classes and pairs up to degree 9 in both spaces"))
}

fn a5(engine: &Engine) -> Outcome {
    let mut n = 0;
    for m in 0..=6 {
        let cat = engine.enum_ecmc(m).map_err(|e| e.to_string())?;
        for i in 0..cat.len() {
            let g = cat.graph(i);
            let back = deframe_vec(&deframe(&g), true);
            ensure(back == GraphVector::from_graph(&g, AsMode::Raw), || format!("round trip fails on {}", cat.classes[i]))?;
            n += 1;
        }
    }
    Ok(format!("deframe_inv after deframe is the identity on {n} classes"))
}

fn a6() -> Outcome {
    let mut graphs = 0;
    for m in 0..=5 {
        let all = common::all_graphs(m, false);
        for mode in [AsMode::Full, AsMode::YExempt] {
            let mut groups: BTreeMap<String, Vec<&Graph>> = BTreeMap::new();
            for g in &all {
                let c = canonicalize(g, mode);
                ensure(c.zero == common::oracle_zero(g, mode), || format!("zero flag wrong for {g} ({mode})"))?;
                groups.entry(c.key).or_default().push(g);
            }
            let reps: Vec<&Graph> = groups.values().map(|v| v[0]).collect();
            for members in groups.values() {
                let r = members[0];
                let rc = canonicalize(r, mode);
                for g in members {
                    let (even, odd) = common::iso_parities(g, r, mode);
                    ensure(even || odd, || format!("{g} and {r} share a key but are not isomorphic ({mode})"))?;
                    if !rc.zero {
                        let rel = canonicalize(g, mode).sign * rc.sign;
                        ensure(!(even && odd) && (rel == -1) == odd, || format!("relative sign wrong for {g} vs {r} ({mode})"))?;
                    }
                }
            }
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    ensure(common::iso_parities(a, b, mode) == (false, false), || {
                        format!("{a} and {b} are isomorphic but have different keys ({mode})")
                    })?;
                }
            }
            graphs += all.len();
        }
    }
    Ok(format!("{graphs} labeled graph/mode pairs of degree <= 5 agree with the automorphism oracle"))
}

fn a7(engine: &Engine) -> Outcome {
    let mut n = 0;
    for space in [Space::Cmc, Space::Ecmc] {
        for m in 0..=12 {
            for connected in [false, true] {
                let quot = engine.quotient(m, space, connected).map_err(|e| e.to_string())?;
                let mat = &quot.relations.matrix;
                let r = rank(mat);
                ensure(r == quot.rank(), || format!("Markowitz rank {r} vs echelon rank {} ({space} {m})", quot.rank()))?;
                for p in PRIMES {
                    let rp = rank_modp(mat, p).map_err(|e| e.to_string())?;
                    ensure(rp == r, || format!("rank mod {p} is {rp}, rational rank {r} ({space} deg {m})"))?;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} relation matrices agree over Q and mod {} and {}", PRIMES[0], PRIMES[1]))
}

/// The degree-`3k` piece of the exponential of the dual of Θ.
fn exp_component(engine: &Engine, w: &WeightSystem, k: usize) -> Result<WeightSystem, String> {
    let mut acc = WeightSystem::counit(engine, Space::Cmc).map_err(|e| e.to_string())?;
    for _ in 0..k {
        acc = ws_product(engine, &acc, w).map_err(|e| e.to_string())?;
    }
    let fact: i64 = (1..=k as i64).product();
    let inv = q(1, fact);
    acc.values.iter_mut().for_each(|v| *v *= &inv);
    Ok(acc)
}

fn only_y_or_trivalent(key: &str) -> bool {
    key.parse::<Graph>().unwrap().components().iter().all(|c| c.is_y() || c.univalent_count() == 0)
}

fn a8(engine: &Engine) -> Outcome {
    let w = WeightSystem::dual_theta(engine).map_err(|e| e.to_string())?;
    let eval = |ws: &WeightSystem, v: &GraphVector| ws_eval(engine, ws, v).map_err(|e| e.to_string());
    let ny = theta_normalize(&GraphVector::from_graph(&y_graph(), AsMode::YExempt));
    let nt = theta_normalize(&GraphVector::from_graph(&theta(), AsMode::YExempt));
    ensure(eval(&w, &ny)? == q(1, 2), || "Y does not evaluate to 1/2".into())?;
    ensure(eval(&w, &nt)? == q(1, 1), || "Θ does not evaluate to 1".into())?;

    let exps: Vec<WeightSystem> = (0..=3).map(|k| exp_component(engine, &w, k)).collect::<Result<_, _>>()?;
    let e = |m: usize| &exps[m / 3];
    let mut pairs = 0;
    let mut classes: Vec<(usize, String)> = Vec::new();
    for m in [0, 3, 6, 9] {
        let cat = engine.enum_ecmc(m).map_err(|e| e.to_string())?;
        classes.extend(cat.classes.iter().filter(|k| only_y_or_trivalent(k)).map(|k| (m, k.clone())));
    }
    for (mx, x) in &classes {
        for (my, y) in classes.iter().filter(|(my, _)| mx + my <= 9) {
            let (gx, gy): (Graph, Graph) = (x.parse().unwrap(), y.parse().unwrap());
            let nx = theta_normalize(&GraphVector::from_graph(&gx, AsMode::YExempt));
            let ny = theta_normalize(&GraphVector::from_graph(&gy, AsMode::YExempt));
            let nxy = theta_normalize(&GraphVector::from_graph(&gx.disjoint_union(&gy), AsMode::YExempt));
            ensure(nxy == product(&nx, &ny, AsMode::Full), || format!("normalization not multiplicative on {x} * {y}"))?;
            let lhs = eval(e(mx + my), &nxy)?;
            let rhs = eval(e(*mx), &nx)? * eval(e(*my), &ny)?;
            ensure(lhs == rhs, || format!("evaluation not multiplicative on {x} * {y}: {lhs} vs {rhs}"))?;
            pairs += 1;
        }
    }
    Ok(format!("Y -> 1/2, Θ -> 1, multiplicative on {pairs} pairs up to degree 9"))
}

fn main() {
    let engine = Engine::with_limit(15);
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("A1", &|| a1(&engine)),
        ("A2", &|| a2(&engine)),
        ("A3", &|| a3(&engine)),
        ("A4", &|| a4(&engine)),
        ("A5", &|| a5(&engine)),
        ("A6", &a6),
        ("A7", &|| a7(&engine)),
        ("A8", &|| a8(&engine)),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("{name} PASS ({secs:.2}s): {msg}"),
            Err(msg) => {
                println!("{name} FAIL ({secs:.2}s): {msg}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
