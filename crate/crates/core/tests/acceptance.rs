//! Acceptance suite: one PASS/FAIL line per criterion, with the seed used.
//! Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitgraph::artal::{self, ArtalType};
use splitgraph::cover::GaloisCover;
use splitgraph::curvecomb::{build_splitting_cover, connected_number, splitting_number, total_partition};
use splitgraph::cyclicnum::{artal_h_evals, extract_offsets, h_values_for_artal, recover_beta, sample_coefficients, theorem_net_voltage, zeta};
use splitgraph::equivalence::{distinguish, exhaustive_equivalence, twisted_copy, verify_witness, Limits, Verdict};
use splitgraph::fingroup::{coset_of, same_group, GroupAutomorphism, Subset};
use splitgraph::fixtures::{irreducible_sextic, s3_cover, split_sextic};
use splitgraph::multigraph::Walk;

use common::{random_closed_walk, random_instance, walk_offsets};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gamma(c: &GaloisCover) -> Walk {
    use splitgraph::multigraph::Sign::Plus;
    c.walk_from_ids("a", &[("e_ab", Plus), ("e_bc", Plus), ("e_ca", Plus)]).unwrap()
}

fn s3_values(_seed: u64) -> Outcome {
    let t = Instant::now();
    let c = s3_cover();
    let g = c.group();
    let walk = gamma(&c);
    let a1 = c.total().vertex("a1").unwrap();
    let c1 = c.total().vertex("c1").unwrap();
    let nv = c.net_voltage_set(&walk, a1).unwrap();
    ensure!(nv == g.full_subset(), "NV(γ, a1) = {}", g.format_subset(&nv));
    let g2 = walk.shift(2, c.base()).unwrap();
    let nv2 = c.net_voltage_set(&g2, c1).unwrap();
    let expected = Subset::new(["id", "(1 3)", "(1 2)", "(1 3 2)"].iter().map(|l| g.index_of(l).unwrap()));
    ensure!(nv2 == expected, "NV(γ^(2), c1) = {}", g.format_subset(&nv2));
    ensure!(c.net_voltage_class(&walk).unwrap() != c.net_voltage_class(&g2).unwrap(), "classes coincide");
    let elapsed = t.elapsed();
    ensure!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(format!("NV(γ)=S3, NV(γ^(2))={}, {elapsed:?}", g.format_subset(&nv2)))
}

/// Conjugation, inverse and product identities at every lift of the base point.
fn check_walk_identities(c: &GaloisCover, w1: &Walk, w2: &Walk) -> Result<(), String> {
    let (g, grp) = (c.base(), c.group());
    for &lift in c.fiber_vertices(w1.start).unwrap() {
        let nv1 = c.net_voltage_set(w1, lift).unwrap();
        let nv2 = c.net_voltage_set(w2, lift).unwrap();
        for h in grp.elements() {
            let moved = c.net_voltage_set(w1, c.act_vertex(h, lift)).unwrap();
            ensure!(moved == grp.conjugate_subset(h, &nv1), "conjugation identity fails for {}", w1.display(g));
        }
        let inv = c.net_voltage_set(&w1.inverse(g).unwrap(), lift).unwrap();
        ensure!(inv == grp.inverse_set(&nv1), "inverse identity fails for {}", w1.display(g));
        let prod = c.net_voltage_set(&w1.concat(w2, g).unwrap(), lift).unwrap();
        ensure!(prod == grp.product_set(&nv1, &nv2), "product identity fails for {} · {}", w1.display(g), w2.display(g));
    }
    Ok(())
}

/// Splits `w^(i)` at a repeated vertex into `w1 w2`, if one exists.
fn split_at_repeat(w: &Walk, g: &splitgraph::multigraph::Multigraph) -> Option<(Walk, Walk, Walk)> {
    let vs = w.vertices(g);
    let n = w.len();
    for i in 0..n {
        for j in i + 1..n {
            if vs[i] == vs[j] {
                let sh = w.shift(i, g).unwrap();
                let k = j - i;
                let w1 = Walk::new(g, sh.start, sh.steps[..k].to_vec()).unwrap();
                let w2 = Walk::new(g, sh.start, sh.steps[k..].to_vec()).unwrap();
                return Some((sh, w1, w2));
            }
        }
    }
    None
}

fn walk_identity_suite(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decompositions = 0;
    let covers = 120;
    for n in 0..covers {
        let inst = random_instance(&mut rng, 6, 12);
        let c = &inst.cover;
        let g = c.base();
        ensure!(g.vertex_count() <= 12, "base too large");
        ensure!(c.validate().passed(), "cover {n} invalid: {}", c.validate());
        let grp = c.group();
        for _ in 0..3 {
            let v = rng.gen_range(0..g.vertex_count());
            let w1 = random_closed_walk(g, v, 6, &mut rng);
            let w2 = random_closed_walk(g, v, 6, &mut rng);
            check_walk_identities(c, &w1, &w2).map_err(|e| format!("cover {n}: {e}"))?;
            let lift = c.fiber_vertices(v).unwrap()[0];
            let nv = c.net_voltage_set(&w1, lift).unwrap();
            for j in 0..w1.len() {
                let sh = w1.shift(j, g).unwrap();
                let lj = c.fiber_vertices(sh.start).unwrap()[0];
                ensure!(c.net_voltage_set(&sh, lj).unwrap() == nv, "cover {n}: abelian shift invariance fails at j={j}");
            }
            if let Some((sh, a, b)) = split_at_repeat(&w1, g) {
                let l = c.fiber_vertices(sh.start).unwrap()[0];
                let prod = grp.product_set(&c.net_voltage_set(&a, l).unwrap(), &c.net_voltage_set(&b, l).unwrap());
                ensure!(prod == nv, "cover {n}: decomposition fails for {}", w1.display(g));
                decompositions += 1;
            }
        }
    }
    ensure!(decompositions >= 50, "only {decompositions} decompositions exercised");

    let c = s3_cover();
    let g = c.base();
    let walk = gamma(&c);
    for w2 in [walk.clone(), walk.inverse(g).unwrap(), Walk::trivial(walk.start)] {
        check_walk_identities(&c, &walk, &w2).map_err(|e| format!("S3: {e}"))?;
    }
    let shifted = walk.shift(2, g).unwrap();
    ensure!(
        c.net_voltage_class(&walk).unwrap() != c.net_voltage_class(&shifted).unwrap(),
        "S3 shift counterexample not reproduced"
    );
    Ok(format!("{covers} random covers + S3, {decompositions} decompositions, S3 shift counterexample reproduced"))
}

fn theorem_vs_bfs(seed: u64) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < 250 {
        let inst = random_instance(&mut rng, 5, 12);
        let c = &inst.cover;
        let point = rng.gen_range(0..inst.curve.points.len());
        let walk = random_closed_walk(c.base(), point, 6, &mut rng);
        if walk.is_empty() {
            continue;
        }
        ensure!(walk.len() <= 12, "walk too long");
        let (s_list, alphas) = walk_offsets(&inst, &walk);
        let predicted = theorem_net_voltage(&s_list, &alphas, inst.data.m).unwrap();
        let lift = c.fiber_vertices(point).unwrap()[0];
        let nv = c.net_voltage_set(&walk, lift).unwrap();
        let bfs = coset_of(c.group(), &nv).unwrap();
        ensure!(
            bfs.as_ref() == Some(&predicted),
            "m={} s={s_list:?} α={alphas:?}: theorem {predicted} vs BFS {bfs:?}",
            inst.data.m
        );
        checked += 1;
    }
    // fixed instance: m = 6, s = (2, 3), α = (1, 2)
    let predicted = theorem_net_voltage(&[2, 3], &[1, 2], 6).unwrap();
    ensure!(predicted.step() == 1, "gcd(2,3) should give all of Z_6");
    let elapsed = t.elapsed();
    ensure!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    Ok(format!("{checked} instances, {elapsed:?}"))
}

fn zariski_pair(_seed: u64) -> Outcome {
    let ty = ArtalType::parse("3,3,3").unwrap();
    let table = artal::family_table(&ty);
    ensure!(table.len() == 2, "family has {} classes", table.len());
    let c0 = artal::splitting_graph_of(&ty, 0).unwrap();
    let c1 = artal::splitting_graph_of(&ty, 1).unwrap();
    let taus = artal::allowed_automorphisms(c0.group()).unwrap();
    ensure!(taus.len() == 2, "expected τ+ and τ-");
    for tau in &taus {
        let v = distinguish(&c0, &c1, tau).unwrap();
        ensure!(v.is_distinguished(), "distinguish under {} gave {}", tau.describe(), v.name());
        let e = exhaustive_equivalence(&c0, &c1, tau, &Limits::default()).unwrap();
        ensure!(e.is_distinguished(), "exhaustive search under {} gave {}", tau.describe(), e.name());
    }
    Ok("2 classes; Distinguished under τ+ and τ-, exhaustive search agrees".into())
}

fn plet_counts(_seed: u64) -> Outcome {
    let cases = [
        ("6:6:6", 4),
        ("2,4:2,2,2:6", 2),
        ("1,2:3:3", 1),
        ("1,5:2,4:6", 1),
        ("1,3:2,2:4", 1),
        ("1,1,1:3:3", 1),
    ];
    for (spec, expected) in cases {
        let ty = ArtalType::parse(spec).unwrap();
        let n = artal::family_table(&ty).len();
        ensure!(n == expected, "{spec}: {n} classes, expected {expected}");
        if expected == 1 {
            ensure!(ty.s() == 1, "{spec}: s = {}", ty.s());
        }
    }
    Ok("(6,6,6) -> 4, ((2,4),(2,2,2),(6)) -> 2, s=1 -> 1".into())
}

fn all_branches(ty: &ArtalType) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..ty.mu(0) {
        for b in 0..ty.mu(1) {
            for c in 0..ty.mu(2) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn numeric_beta(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types: [(usize, &[&str]); 3] = [
        (3, &["3,3,3", "1,2:3:3", "1,1,1:3:3"]),
        (4, &["4:4:4", "2,2:4:4", "1,3:2,2:4"]),
        (6, &["6:6:6", "2,4:2,2,2:6", "3,3:6:6"]),
    ];
    let mut sets = 0;
    let mut branch_checks = 0;
    let mut worst_residual: f64 = 0.0;
    let mut worst_margin = f64::INFINITY;
    for (d, specs) in types {
        for k in 0..20 {
            let ty = ArtalType::parse(specs[k % specs.len()]).unwrap();
            ensure!(ty.d() == d, "type degree");
            let s = ty.s();
            let beta = rng.gen_range(0..s);
            let (c, _g0) = sample_coefficients(&ty, beta, &mut rng).unwrap();
            let h = h_values_for_artal(&ty, beta, &c, 1e-9).unwrap();
            let pattern = [
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                zeta(d, (ty.mu(2) * beta) as i64),
            ];
            for (i, (x, y)) in h.iter().zip(&pattern).enumerate() {
                ensure!((x - y).norm() < 1e-9, "{ty} β={beta}: h[{i}] = {x} expected {y}");
            }
            for branches in all_branches(&ty) {
                let offsets = extract_offsets(&artal_h_evals(&ty, &h, branches), d, 1e-6).unwrap();
                let sum: usize = offsets.iter().map(|o| o.alpha).sum();
                ensure!(sum % s == beta, "{ty} β={beta} branches {branches:?}: Σα = {sum}");
                for o in &offsets {
                    ensure!(o.residual < 1e-6 && o.margin > 1e-5, "{ty}: residual {} margin {}", o.residual, o.margin);
                    worst_residual = worst_residual.max(o.residual);
                    worst_margin = worst_margin.min(o.margin);
                }
                let r = recover_beta(&ty, beta, &c, 1e-6, branches).unwrap();
                ensure!(r.beta == beta && r.net_voltage.step() == s, "{ty}: recovered {}", r.net_voltage);
                branch_checks += 1;
            }
            sets += 1;
        }
    }
    Ok(format!(
        "{sets} coefficient sets, {branch_checks} branch choices, max residual {worst_residual:.1e}, min margin {worst_margin:.3}"
    ))
}

fn sextic_fixtures(_seed: u64) -> Outcome {
    let (curve2, data2) = split_sextic();
    let (curve3, data3) = irreducible_sextic();
    let c2 = build_splitting_cover(&curve2, &data2).unwrap();
    let c3 = build_splitting_cover(&curve3, &data3).unwrap();
    ensure!(c2.validate().passed() && c3.validate().passed(), "invalid fixture cover");
    let (s2, s3) = (splitting_number(&c2, "C1").unwrap(), splitting_number(&c3, "C2").unwrap());
    ensure!((s2, s3) == (2, 1), "splitting numbers {s2} vs {s3}");
    ensure!(data2.s["C1"] == 2 && data3.s["C2"] == 1, "splitting data");
    let (k2, k3) = (connected_number(&c2), connected_number(&c3));
    ensure!((k2, k3) == (1, 1), "connected numbers {k2} vs {k3}");

    let inc2 = curve2.incidence_graph().unwrap();
    let inc3 = curve3.incidence_graph().unwrap();
    let p2 = total_partition(&c2, &inc2);
    let p3 = total_partition(&c3, &inc3);
    let isos = c2.total().isomorphisms(c3.total(), Some((&p2, &p3))).count();
    ensure!(isos == 0, "{isos} partition-preserving isomorphisms between the total graphs");

    ensure!(same_group(c2.group(), c3.group()), "both covers should be over Z_2");
    let tau = GroupAutomorphism::identity(c2.group());
    let v = distinguish(&c2, &c3, &tau).unwrap();
    ensure!(v.is_distinguished(), "distinguish gave {}", v.name());
    let e = exhaustive_equivalence(&c2, &c3, &tau, &Limits::default()).unwrap();
    ensure!(e.is_distinguished(), "exhaustive search gave {}", e.name());
    Ok("splitting numbers 2 vs 1, component fibers 2 vs 1, connected numbers 1 and 1, Distinguished, no isomorphism of totals".into())
}

fn soundness(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = Limits::default();
    let mut equivalent = 0;
    for n in 0..50 {
        let cover = if n % 10 == 0 { s3_cover() } else { random_instance(&mut rng, 4, 8).cover };
        let autos = cover.group().automorphisms();
        let tau = autos[rng.gen_range(0..autos.len())].clone();
        let (copy, built) = twisted_copy(&cover, &tau, &mut rng).unwrap();
        ensure!(verify_witness(&cover, &copy, &tau, &built).is_ok(), "copy {n}: construction witness fails");
        let v = distinguish(&cover, &copy, &tau).unwrap();
        ensure!(!v.is_distinguished(), "copy {n}: distinguish returned Distinguished");
        match exhaustive_equivalence(&cover, &copy, &tau, &limits).unwrap() {
            Verdict::Equivalent(w) => {
                verify_witness(&cover, &copy, &tau, &w).map_err(|e| format!("copy {n}: witness rejected: {e}"))?;
                equivalent += 1;
            }
            other => return Err(format!("copy {n}: exhaustive search gave {}", other.name())),
        }
    }
    Ok(format!("{equivalent}/50 twisted copies Equivalent with verified witnesses, none Distinguished"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn(u64) -> Outcome, u64); 8] = [
        ("S3 fixture net voltages", s3_values, 0),
        ("net voltage identities", walk_identity_suite, 0x5eed_0002),
        ("theorem vs fiber BFS", theorem_vs_bfs, 0x5eed_0003),
        ("Artal Zariski pair d=3", zariski_pair, 0),
        ("Zariski plet counts", plet_counts, 0),
        ("numeric beta recovery", numeric_beta, 0x5eed_0006),
        ("sextic fixtures", sextic_fixtures, 0),
        ("soundness battery", soundness, 0x5eed_0008),
    ];
    let mut failures = 0;
    for (i, (name, check, seed)) in criteria.into_iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(|| check(seed))).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS {} {name} (seed {seed:#x}): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name} (seed {seed:#x}): {why}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
