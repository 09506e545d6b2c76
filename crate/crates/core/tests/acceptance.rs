//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{brute_force_distances, grid_rows, line_pixel, naive_cubical, naive_rips, pairs_match, surface_pixel};
use pimage::datasets::{circle_points, ltm_dataset, shape_dataset, shared_image_bounds};
use pimage::filtration::{cubical_sublevel, persistence, persistence_pairs, rips_persistence};
use pimage::image::{compute_image, compute_image_1d, concatenate_images};
use pimage::metrics::{bottleneck, build_distance_matrix, vector_distance, wasserstein, Norm, Provenance};
use pimage::ml::{clustering_accuracy, kmedoids, parameter_sweep, PipelineConfig};
use pimage::stability::{
    erf_lemma_bound, erf_lemma_f, random_diagram, verify_stability, weighted_gaussian_l1_1d, weighted_gaussian_l1_2d,
    StabilityRun,
};
use pimage::{transform_to_birth_persistence, GridBounds, ImageSpec, PersistenceDiagram, PointCloud, ScalarGrid, WeightingFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn stability_suites() -> Outcome {
    let start = Instant::now();
    let random = verify_stability(&StabilityRun { pairs: 200, seed: 2024, ..StabilityRun::default() }).unwrap();
    let close = verify_stability(&StabilityRun {
        pairs: 100,
        seed: 7,
        sigma: 0.05,
        b: 0.5,
        perturbed_fraction: 1.0,
        ..StabilityRun::default()
    })
    .unwrap();
    let report = random.merge(&close);
    let elapsed = start.elapsed();
    let names = [
        "surface_sup_general",
        "image_linf_general",
        "image_l1_general",
        "image_l2_general",
        "surface_l1_gaussian",
        "image_l1_gaussian",
        "image_l2_gaussian",
        "image_linf_gaussian",
    ];
    let complete = names.iter().all(|n| report.bound(n).is_some_and(|b| b.checks == report.pairs_tested));
    let mut detail = format!(
        "{} pairs, {} violations, max ratio {:.3e}, {:.1?}",
        report.pairs_tested,
        report.violations(),
        report.max_ratio(),
        elapsed
    );
    for b in &report.bounds {
        detail.push_str(&format!("; {} {:.3e}", b.name, b.max_ratio));
    }
    outcome(
        complete && report.pairs_tested >= 200 && report.violations() == 0 && elapsed < Duration::from_secs(120),
        detail,
    )
}

fn erf_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let (mut worst_err, mut bound_fail, mut worst_slope, mut worst_2d) = (0.0f64, 0, 0.0f64, 0.0f64);
    let n = 150;
    for _ in 0..n {
        let a = rng.random_range(0.05..2.0);
        let b = rng.random_range(0.05..2.0);
        let sigma = rng.random_range(0.02..0.5);
        let u = rng.random_range(-1.0..1.0);
        let v = rng.random_range(-1.0..1.0);
        let f = erf_lemma_f(a, b, sigma, v - u).unwrap();
        let q = weighted_gaussian_l1_1d(a, u, b, v, sigma).unwrap();
        worst_err = worst_err.max((f - q).abs());
        if f > erf_lemma_bound(a, b, sigma, v - u) * (1.0 + 1e-12) {
            bound_fail += 1;
        }
        // Equal weights: F(z) / z tends to sqrt(2/pi) a / sigma.
        let z = 1e-4 * sigma;
        let slope = erf_lemma_f(a, a, sigma, z).unwrap() / z;
        let limit = (2.0 / std::f64::consts::PI).sqrt() * a / sigma;
        worst_slope = worst_slope.max((slope / limit - 1.0).abs());
        // Two-dimensional form with the ramp weighting.
        let ramp = WeightingFunction::piecewise_linear(rng.random_range(0.2..1.5)).unwrap();
        let kernel = pimage::KernelSpec::new(sigma).unwrap();
        let pu = (rng.random_range(0.0..1.0), rng.random_range(0.01..1.0));
        let pv = (rng.random_range(0.0..1.0), rng.random_range(0.01..1.0));
        let (lhs, rhs) = weighted_gaussian_l1_2d(pu, pv, &ramp, &kernel).unwrap();
        worst_2d = worst_2d.max(lhs / rhs);
    }
    outcome(
        worst_err <= 1e-6 && bound_fail == 0 && worst_slope <= 0.01 && worst_2d <= 1.0,
        format!(
            "{n} instances, max |F - quadrature| {worst_err:.2e}, bound failures {bound_fail}, max slope error {:.4}%, max 2-D ratio {worst_2d:.3}",
            100.0 * worst_slope
        ),
    )
}

fn matching_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let n = 500;
    for _ in 0..n {
        let mk = |rng: &mut ChaCha8Rng| {
            let k = rng.random_range(0..=6);
            PersistenceDiagram::from_pairs(
                1,
                (0..k)
                    .map(|_| {
                        let b: f64 = rng.random();
                        (b, b + rng.random::<f64>())
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let (a, b) = (mk(&mut rng), mk(&mut rng));
        let (w1, w2, wi) = brute_force_distances(&a, &b);
        worst = worst
            .max((wasserstein(&a, &b, 1.0).unwrap().0 - w1).abs())
            .max((wasserstein(&a, &b, 2.0).unwrap().0 - w2).abs())
            .max((bottleneck(&a, &b).unwrap().0 - wi).abs());
    }
    outcome(worst <= 1e-12, format!("{n} pairs, max cost difference {worst:.2e}"))
}

fn pixel_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst2, mut worst1) = (0.0f64, 0.0f64);
    let n = 100;
    for _ in 0..n {
        let d = random_diagram(&mut rng, 6);
        let sigma = rng.random_range(0.05..0.3);
        let b = rng.random_range(0.2..1.5);
        let res = (rng.random_range(2..=8), rng.random_range(2..=8));
        let spec = ImageSpec::new(res, sigma, b, GridBounds::padded(0.0, 1.0, 1.0, sigma)).unwrap();
        let img = compute_image(&d, &spec).unwrap();
        let centers: Vec<_> = transform_to_birth_persistence(&d)
            .iter()
            .map(|u| (u.birth, u.persistence, spec.weighting.eval(u.birth, u.persistence)))
            .collect();
        let (xe, ye) = (spec.col_edges(), spec.row_edges());
        for r in 0..res.0 {
            for c in 0..res.1 {
                let q = surface_pixel(&centers, sigma, xe[c], xe[c + 1], ye[r], ye[r + 1], 1e-13);
                worst2 = worst2.max((img.get(r, c) - q).abs());
            }
        }

        let h0 = PersistenceDiagram::from_pairs(0, d.points().iter().map(|p| (0.0, p.persistence())).collect::<Vec<_>>()).unwrap();
        let spec1 = ImageSpec::one_dimensional(res.1 + 3, sigma, b, 0.0, 1.0 + 3.0 * sigma).unwrap();
        let img1 = compute_image_1d(&h0, &spec1).unwrap();
        let c1: Vec<_> = h0.points().iter().map(|p| (p.persistence(), spec1.weighting.eval(0.0, p.persistence()))).collect();
        let e = spec1.col_edges();
        for c in 0..e.len() - 1 {
            worst1 = worst1.max((img1.pixels()[c] - line_pixel(&c1, sigma, e[c], e[c + 1], 1e-14)).abs());
        }
    }
    outcome(
        worst2 <= 1e-8 && worst1 <= 1e-8,
        format!("{n} diagrams, max pixel error 2-D {worst2:.2e}, 1-D {worst1:.2e}"),
    )
}

fn filtration_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 200;
    let mut mismatches = 0;
    for _ in 0..n {
        let k = rng.random_range(2..=8);
        let dim = rng.random_range(1..=3);
        let pts: Vec<Vec<f64>> = (0..k).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect();
        let d = rips_persistence(&PointCloud::new(pts.clone()).unwrap(), 1, None).unwrap();
        let naive = naive_rips(&pts);
        for h in 0..2 {
            if !pairs_match(&d[h].sorted_pairs(), &naive.finite[h], 1e-12) || d[h].dropped_infinite() != naive.essential[h] {
                mismatches += 1;
            }
        }
    }
    let square = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let sq = rips_persistence(&square, 1, None).unwrap();
    let square_ok = sq[1].sorted_pairs() == vec![(1.0, 2f64.sqrt())];
    let circle = rips_persistence(&circle_points(20).unwrap(), 1, None).unwrap();
    let circle_ok = circle[1].len() == 1;
    outcome(
        mismatches == 0 && square_ok && circle_ok,
        format!(
            "{n} clouds, {mismatches} mismatches; unit square H1 {:?}; circle H1 count {}",
            sq[1].sorted_pairs(),
            circle[1].len()
        ),
    )
}

struct ShapeData {
    h1: Vec<PersistenceDiagram>,
    labels: Vec<String>,
}

fn shape_diagrams() -> (ShapeData, Duration) {
    let start = Instant::now();
    let clouds = shape_dataset(10, 200, 0.05, 2016).unwrap();
    let labels = clouds.iter().map(|c| c.label().unwrap().to_string()).collect();
    let h1 = clouds
        .iter()
        .map(|c| rips_persistence(c, 1, None).unwrap().pop().unwrap())
        .collect();
    (ShapeData { h1, labels }, start.elapsed())
}

fn table_reproduction(data: &ShapeData) -> Outcome {
    let sigma = 0.1;
    let pi_start = Instant::now();
    let (bounds, b) = shared_image_bounds(&data.h1, sigma).unwrap();
    let spec = ImageSpec::new((20, 20), sigma, b, bounds).unwrap();
    let images: Vec<Vec<f64>> = data.h1.iter().map(|d| compute_image(d, &spec).unwrap().pixels().to_vec()).collect();
    let mut pi_time = pi_start.elapsed();
    let mut accuracies = Vec::new();
    for norm in Norm::ALL {
        let t = Instant::now();
        let m = build_distance_matrix(&images, data.labels.clone(), |x, y| vector_distance(x, y, norm), Provenance::new("pi", norm.to_string())).unwrap();
        if norm == Norm::L2 {
            pi_time += t.elapsed();
        }
        let c = kmedoids(&m, 6, 100, 11).unwrap();
        accuracies.push((norm, clustering_accuracy(&c, &data.labels).unwrap()));
    }
    let t = Instant::now();
    let w1 = build_distance_matrix(&data.h1, data.labels.clone(), |x, y| Ok(wasserstein(x, y, 1.0)?.0), Provenance::new("pd", "w1")).unwrap();
    let pd_time = t.elapsed();
    let pd_acc = clustering_accuracy(&kmedoids(&w1, 6, 100, 11).unwrap(), &data.labels).unwrap();
    let pass = accuracies.iter().all(|&(_, a)| a >= 0.90) && pi_time < pd_time;
    outcome(
        pass,
        format!(
            "PI-H1 accuracy {}; PD-H1 W1 accuracy {pd_acc:.3}; PI matrix {pi_time:.2?} vs PD W1 matrix {pd_time:.2?}",
            accuracies.iter().map(|(n, a)| format!("{n} {a:.3}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn sweep(data: &ShapeData) -> Outcome {
    let cfg = PipelineConfig { norm: Norm::L2, k: 6, restarts: 100, seed: 5 };
    let cells = parameter_sweep(&data.h1, &data.labels, &[10, 20, 40], &[0.05, 0.1, 0.2], &cfg).unwrap();
    let lo = cells.iter().map(|c| c.accuracy).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|c| c.accuracy).fold(0.0, f64::max);
    outcome(
        cells.len() == 9 && hi - lo <= 0.10 + 1e-12,
        format!(
            "accuracies {}; spread {:.1} points",
            cells.iter().map(|c| format!("{}x{}/{}: {:.3}", c.resolution, c.resolution, c.sigma, c.accuracy)).collect::<Vec<_>>().join(", "),
            100.0 * (hi - lo)
        ),
    )
}

fn linked_twist_map() -> Outcome {
    let sigma = 0.005;
    let clouds = ltm_dataset(&[2.5, 4.3], 20, 1000, 300, 1).unwrap();
    let labels: Vec<String> = clouds.iter().map(|c| c.label().unwrap().to_string()).collect();
    let diagrams: Vec<Vec<PersistenceDiagram>> = clouds.iter().map(|c| rips_persistence(c, 1, None).unwrap()).collect();
    let h0: Vec<PersistenceDiagram> = diagrams.iter().map(|d| d[0].clone()).collect();
    let h1: Vec<PersistenceDiagram> = diagrams.iter().map(|d| d[1].clone()).collect();
    let b0 = h0.iter().filter_map(|d| d.max_persistence()).fold(0.0, f64::max);
    let spec0 = ImageSpec::one_dimensional(20, sigma, b0, 0.0, b0 + 3.0 * sigma).unwrap();
    let (bounds1, b1) = shared_image_bounds(&h1, sigma).unwrap();
    let spec1 = ImageSpec::new((20, 20), sigma, b1, bounds1).unwrap();
    let vectors: Vec<Vec<f64>> = h0
        .iter()
        .zip(&h1)
        .map(|(d0, d1)| concatenate_images(&[compute_image_1d(d0, &spec0).unwrap(), compute_image(d1, &spec1).unwrap()]).unwrap())
        .collect();
    let m = build_distance_matrix(&vectors, labels.clone(), |x, y| vector_distance(x, y, Norm::L2), Provenance::new("pi", "l2")).unwrap();
    let c = kmedoids(&m, 2, 100, 3).unwrap();
    let acc = clustering_accuracy(&c, &labels).unwrap();
    outcome(acc >= 0.75, format!("40 orbits, 2 classes, H0+H1 PI accuracy {acc:.3}"))
}

fn cubical() -> Outcome {
    let mut ring = vec![vec![1.0; 5]; 5];
    for i in 0..5 {
        ring[0][i] = 0.0;
        ring[4][i] = 0.0;
        ring[i][0] = 0.0;
        ring[i][4] = 0.0;
    }
    let g = ScalarGrid::from_rows(ring).unwrap();
    let d = persistence(&cubical_sublevel(&g).unwrap(), 1).unwrap();
    let ring_ok = d[1].sorted_pairs() == vec![(0.0, 1.0)];

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let n = 120;
    let mut failures = 0;
    for trial in 0..n {
        let (r, c) = (rng.random_range(2..=32), rng.random_range(2..=32));
        let levels = rng.random_range(2..=20);
        let vals: Vec<f64> = (0..r * c).map(|_| rng.random_range(0..levels) as f64).collect();
        let g = ScalarGrid::new(r, c, vals).unwrap();
        let k = cubical_sublevel(&g).unwrap();
        let d = persistence(&k, 1).unwrap();
        let mut essential = vec![Vec::new(), Vec::new()];
        for p in persistence_pairs(&k, 1).unwrap() {
            if p.death.is_none() {
                essential[p.dim].push(k.cells()[p.birth].value);
            }
        }
        let mut ts = g.values().to_vec();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let consistent = ts.iter().all(|&t| {
            let chi: i64 = k.cells().iter().filter(|c| c.value <= t).map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum();
            let betti = common::betti_at(&d, &essential, t);
            chi == betti[0] - betti[1]
        });
        // Small grids are also checked against the dense reduction.
        let oracle_ok = r * c > 100 || {
            let naive = naive_cubical(&grid_rows(&g));
            (0..2).all(|h| d[h].sorted_pairs() == naive.finite[h] && d[h].dropped_infinite() == naive.essential[h])
        };
        if !consistent || !oracle_ok || (trial == 0 && k.euler_characteristic() != 1) {
            failures += 1;
        }
    }
    outcome(
        ring_ok && failures == 0,
        format!("5x5 ring H1 {:?}; {n} random grids up to 32x32, {failures} failures", d[1].sorted_pairs()),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        println!("criterion {id} [{name}]: {} ({}) [{:.1?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, el);
        results.push((id, name, o, el));
    };
    run(1, "stability bounds", &stability_suites);
    run(2, "erf lemma", &erf_lemma);
    run(3, "matching oracles", &matching_oracles);
    run(4, "pixel integration oracle", &pixel_oracle);
    run(5, "filtration oracle", &filtration_oracle);
    let (shapes, build) = shape_diagrams();
    println!("  (shape diagrams built in {build:.1?})");
    run(6, "six-shape classification", &|| table_reproduction(&shapes));
    run(7, "resolution and variance sweep", &|| sweep(&shapes));
    run(8, "linked twist map", &linked_twist_map);
    run(9, "cubical persistence", &cubical);
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
