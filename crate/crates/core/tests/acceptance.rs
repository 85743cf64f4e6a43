//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! tolerance is pinned here; the assertions are the shipping gate.

use idealvol::bounds::{degree_bounds, isv_bounds, ManifoldDescriptor, ManifoldKind};
use idealvol::extremal::{estimate_vl, perturbation_check, SearchConfig};
use idealvol::idtri::{
    alternated_fundamental_cycle, detect_mg, local_degrees, marked_homology_ranks, quotient_cells,
    verify_marked_cycle, vertex_links, IdealTriangulation,
};
use idealvol::specfun::{find_root, lobachevsky, v3, v8};
use idealvol::trunc::{
    build_regular_config, ell_g, regular_ell_of_theta, regular_theta_of_ell, regular_volume,
    truncation_polytope, volume,
};
use num_rational::BigRational;
use num_traits::One;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} [{}] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn fixture(name: &str) -> IdealTriangulation {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let text = std::fs::read_to_string(dir.join(name)).expect("fixture exists");
    IdealTriangulation::parse(&text).expect("fixture parses")
}

#[test]
fn criterion_1_octahedron_volume() {
    let t0 = Instant::now();
    let got = 8.0 * lobachevsky(PI / 4.0);
    let elapsed = t0.elapsed();
    let ok = (got - 3.664).abs() < 5e-4 && (got - 3.663862).abs() < 1e-6;
    let timely = elapsed.as_secs_f64() < 1.0;
    report(
        1,
        ok && timely,
        &format!("v8 = {got:.6} (target 3.664 within 5e-4) in {elapsed:?}"),
    );
}

#[test]
fn criterion_2_regular_volume_at_l2() {
    let t0 = Instant::now();
    let l2 = ell_g(2).unwrap();
    let target = (PI / 6.0).cos() / (2.0 * (PI / 6.0).cos() - 1.0);
    let oracle = find_root(|x| x.cosh() - target, 0.0, 2.0, 1e-12).unwrap();
    let vol = regular_volume(l2).unwrap();
    let elapsed = t0.elapsed();
    let ok = (vol - 3.226).abs() < 5e-4 && (l2 - oracle).abs() < 1e-6;
    let timely = elapsed.as_secs_f64() < 1.0;
    report(
        2,
        ok && timely,
        &format!("vol(regular at l_2) = {vol:.6}, l_2 = {l2:.9} vs oracle {oracle:.9}, in {elapsed:?}"),
    );
}

#[test]
fn criterion_3_quadrature_matches_closed_form() {
    let t0 = Instant::now();
    let mut worst = 0.0_f64;
    for theta in [PI / 6.0, PI / 9.0, PI / 12.0] {
        let cfg = build_regular_config(theta).unwrap();
        let poly = truncation_polytope(&cfg).unwrap();
        let quad = volume(&poly, 1e-6).unwrap();
        let ell = regular_ell_of_theta(theta).unwrap();
        let closed = regular_volume(ell).unwrap();
        worst = worst.max((quad - closed).abs());
    }
    let elapsed = t0.elapsed();
    report(
        3,
        worst <= 1e-3 && elapsed.as_secs_f64() < 30.0,
        &format!("max |quadrature - closed form| = {worst:.2e} over three angles in {elapsed:?}"),
    );
}

#[test]
fn criterion_4_theta_of_ell_monotone_with_limits() {
    let mut prev = -1.0;
    let mut monotone = true;
    for i in 0..1000 {
        // geometric grid over [1e-4, 20]
        let ell = 1e-4 * (20.0_f64 / 1e-4).powf(i as f64 / 999.0);
        let theta = regular_theta_of_ell(ell).unwrap();
        if theta <= prev {
            monotone = false;
        }
        prev = theta;
    }
    let at_zero = regular_theta_of_ell(1e-4).unwrap();
    let at_inf = regular_theta_of_ell(20.0).unwrap();
    let limits_ok = at_zero < 1e-3 && (PI / 3.0 - at_inf) < 1e-3;
    report(
        4,
        monotone && limits_ok,
        &format!("theta strictly increasing; theta(1e-4) = {at_zero:.2e}, pi/3 - theta(20) = {:.2e}", PI / 3.0 - at_inf),
    );
}

#[test]
fn criterion_5_extremal_search() {
    let t0 = Instant::now();
    let l2 = ell_g(2).unwrap();
    let res = estimate_vl(&SearchConfig::new(l2)).unwrap();
    let near = (res.best_volume - 3.226).abs() <= 1e-3;
    let elapsed_l2 = t0.elapsed();

    let regular = build_regular_config(PI / 6.0).unwrap();
    let local_max = perturbation_check(&regular, l2, 500, 0.01, 0);

    let small = estimate_vl(&SearchConfig::new(0.05)).unwrap();
    let small_ok =
        small.feasible && small.best_volume >= 3.5 && small.best_volume <= v8() + 1e-6;

    let ok = res.feasible && near && local_max && small_ok && elapsed_l2.as_secs_f64() < 300.0;
    report(
        5,
        ok,
        &format!(
            "V_l2 = {:.6} (feasible {}, {elapsed_l2:?}); perturbation check {local_max}; V_0.05 = {:.6}",
            res.best_volume, res.feasible, small.best_volume
        ),
    );
}

#[test]
fn criterion_6_m2_fixture() {
    let t0 = Instant::now();
    let t = fixture("m2.tri");
    let mg = detect_mg(&t);
    let z = alternated_fundamental_cycle(&t).unwrap();
    let norm_ok = z.l1_norm() == BigRational::from_integer(2.into());
    let cycle_ok = verify_marked_cycle(&t, &z);
    let degrees_ok = local_degrees(&t, &z).iter().all(|d| d.is_one());
    let mut d = ManifoldDescriptor::new(ManifoldKind::Mg);
    d.g = Some(2);
    let isv = isv_bounds(&d).unwrap();
    let isv_ok = isv.exact == Some(2.0);
    let elapsed = t0.elapsed();
    let ok = mg.is_mg
        && mg.g == Some(2)
        && norm_ok
        && cycle_ok
        && degrees_ok
        && isv_ok
        && elapsed.as_secs_f64() < 5.0;
    report(
        6,
        ok,
        &format!(
            "detect = ({}, {:?}), norm 2 = {norm_ok}, cycle = {cycle_ok}, degrees 1 = {degrees_ok}, isv 2 = {isv_ok}, in {elapsed:?}",
            mg.is_mg, mg.g
        ),
    );
}

/// Random fixed-point-free involution on the face slots with random label
/// bijections. Gluings that self-identify an edge class with reversed
/// orientation are resampled: the link complexes are surfaces (and the Euler
/// identity is meaningful) exactly in their absence.
fn random_triangulation(rng: &mut ChaCha8Rng) -> IdealTriangulation {
    loop {
        let g = rng.gen_range(1..=4usize);
        let mut slots: Vec<(usize, usize)> =
            (0..g).flat_map(|t| (0..4).map(move |f| (t, f))).collect();
        // random perfect matching
        let mut list = Vec::new();
        while !slots.is_empty() {
            let a = slots.swap_remove(0);
            let i = rng.gen_range(0..slots.len());
            let b = slots.swap_remove(i);
            // random bijection with perm[a.1] = b.1
            let mut rest_src: Vec<usize> = (0..4).filter(|&v| v != a.1).collect();
            let mut rest_dst: Vec<usize> = (0..4).filter(|&v| v != b.1).collect();
            let mut perm = [0usize; 4];
            perm[a.1] = b.1;
            while !rest_src.is_empty() {
                let s = rest_src.swap_remove(0);
                let j = rng.gen_range(0..rest_dst.len());
                perm[s] = rest_dst.swap_remove(j);
            }
            list.push((a.0, a.1, b.0, b.1, perm));
        }
        let Ok(tri) = IdealTriangulation::from_gluings(g, &list) else {
            continue;
        };
        let q = quotient_cells(&tri);
        if q.edge_classes.iter().any(|e| e.orientation_reversing) {
            continue;
        }
        return tri;
    }
}

fn euler_identity_holds(tri: &IdealTriangulation) -> bool {
    let q = quotient_cells(tri);
    let links = match vertex_links(tri) {
        Ok(l) => l,
        Err(_) => return false,
    };
    let v = q.vertex_classes.len() as i64;
    let e = q.edge_classes.len() as i64;
    let f = q.face_classes.len() as i64;
    let t = tri.tet_count() as i64;
    if f != 2 * t {
        return false;
    }
    let sum_chi: i64 = links.iter().map(|l| l.euler_char).sum();
    // exact arithmetic: compare 2(V - E + F - T) with 2V - sum chi
    2 * (v - e + f - t) == 2 * v - sum_chi
}

#[test]
fn criterion_7_homology_and_euler_identity() {
    let h3 = |name: &str| marked_homology_ranks(&fixture(name)).3;
    let ranks_ok = h3("m2.tri") == 1 && h3("fig8.tri") == 1 && h3("gieseking.tri") == 0;

    let fixtures_ok = ["m2.tri", "m3.tri", "fig8.tri", "gieseking.tri"]
        .iter()
        .all(|n| euler_identity_holds(&fixture(n)));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random_ok = true;
    for _ in 0..200 {
        let tri = random_triangulation(&mut rng);
        if !euler_identity_holds(&tri) {
            random_ok = false;
            break;
        }
        // side conditions of the same suite: the alternated cycle and the
        // top homology rank behave on arbitrary orientable/connected inputs
        if tri.orientable() {
            let z = alternated_fundamental_cycle(&tri).unwrap();
            if !verify_marked_cycle(&tri, &z)
                || !local_degrees(&tri, &z).iter().all(|d| d.is_one())
                || z.l1_norm() != BigRational::from_integer((tri.tet_count() as i64).into())
            {
                random_ok = false;
                break;
            }
        }
        if tri.is_connected() && marked_homology_ranks(&tri).3 != usize::from(tri.orientable()) {
            random_ok = false;
            break;
        }
    }
    report(
        7,
        ranks_ok && fixtures_ok && random_ok,
        &format!("H3 ranks {ranks_ok}; Euler identity, cycles, and H3 on fixtures {fixtures_ok} and 200 random gluings {random_ok}"),
    );
}

#[test]
fn criterion_8_degree_comparator() {
    let b62 = degree_bounds(6, 2).unwrap();
    let basic = b62.ideal == 3 && b62.boundary == 5;

    let b402 = degree_bounds(40, 2).unwrap();
    let ratio = b402.double_ratio / b402.ideal_ratio;
    let near = (ratio - 1.135).abs() <= 0.01;

    let mut sharpest = true;
    for gp in [2u32, 3, 4] {
        for g in gp..=30 {
            let b = degree_bounds(g, gp).unwrap();
            if b.ideal_ratio > b.double_ratio || b.ideal_ratio > b.boundary_ratio {
                sharpest = false;
            }
            if g > gp && (b.ideal_ratio >= b.double_ratio || b.ideal_ratio >= b.boundary_ratio) {
                sharpest = false;
            }
        }
    }
    report(
        8,
        basic && near && sharpest,
        &format!("(6,2) -> (3,5): {basic}; double/ideal at g=40 = {ratio:.4}; ideal sharpest {sharpest}"),
    );
}

#[test]
fn criterion_9_cusped_exact_value() {
    let mut d = ManifoldDescriptor::new(ManifoldKind::CuspedHyperbolic);
    d.volume = Some(2.0 * v3());
    let r = isv_bounds(&d).unwrap();
    let exact = r.exact.unwrap();
    report(
        9,
        (exact - 2.0).abs() < 1e-6,
        &format!("volume 2*v3 gives exact = {exact:.9}"),
    );
}
