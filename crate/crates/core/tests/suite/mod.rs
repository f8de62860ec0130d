//! Checks for the invariants of every module. Each returns `Err` with a
//! diagnostic on failure. `crates/core/tests/properties.rs` runs them as
//! unit tests; the acceptance target runs them as one criterion.

#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;
use vl_core::color::{
    lab_to_srgb8, sample_power_law_rng, srgb_to_lab, ColorLibrary, ColorSource, LabColor, PowerLawParams,
};
use vl_core::compositing::{dof_compose, fuse_three_planes, leaves_stack, DofParams, StackParams};
use vl_core::geometry::{
    concave_hull, delaunay, rasterize, sample_points_in_disk, sample_shape, smooth_mask, Polygon, ShapeMask,
    ShapeParams,
};
use vl_core::image::{ColorSpace, Field, Image64, Mask, RasterImage};
use vl_core::rng::{derive_seed, rng_from_seed};
use vl_core::stats::{
    fit_slope_default, gradient_hist_full, kl_divergence, radial_spectrum, GradHistogram, Gray, GRAD_BINS, GRAD_MAX,
};
use vl_core::textures::{
    micro_texture, periodic_field, perspective_warp, sample_periodic_params, sample_texture, solve_homography,
    HomographyCorners, MicroParams, TextureKind, TextureMix, TextureParams,
};

pub type Check = fn() -> Result<(), String>;

/// Every check, in module order.
pub const ALL: &[(&str, Check)] = &[
    ("color: power-law KS < 0.01", power_law_ks),
    ("color: 32^3 sRGB lattice round trip", srgb_lattice_bijective),
    ("color: draws are a pure function of the seed", color_draws_are_pure),
    ("geometry: concave hull connectivity, containment, monotone area", hull_properties),
    ("geometry: smoothing equals blur-then-threshold", smoothing_is_thresholded_blur),
    ("geometry: rotation invariance up to a 2px band", rotation_invariance),
    ("geometry: shapes are deterministic", shapes_are_deterministic),
    ("textures: fields in [0,1]", fields_in_unit_range),
    ("textures: gamut clamping below 1%", textures_stay_in_gamut),
    ("textures: micro spectral slopes within 0.1", micro_spectral_slopes),
    ("textures: homography round trip > 30 dB", homography_round_trip),
    ("textures: rotated field is analytic", rotated_field_is_analytic),
    ("textures: branch frequencies within 0.02", texture_branch_frequencies),
    ("compositing: visible parts partition the cover", occlusion_partition),
    ("compositing: delta kernels give painter compositing", delta_kernels_are_painter),
    ("compositing: fused mean lightness within layer means", energy_sanity),
    ("compositing: generation is deterministic", generation_is_deterministic),
    ("stats: KL non-negative, zero iff equal", kl_properties),
    ("stats: slope invariant to intensity scaling", slope_scale_invariance),
    ("stats: spectrum invariant to 90 degree rotation", spectrum_rotation_invariance),
    ("stats: gradient histogram invariant to offsets", gradient_offset_invariance),
];

pub fn natural_dir() -> PathBuf {
    match std::env::var_os("VL_NATURAL_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/natural"),
    }
}

/// The bundled fixture, regardless of `VL_NATURAL_DIR`.
pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/natural")
}

pub fn fixture_pool(seed: u64) -> ColorSource {
    ColorLibrary::open(&fixture_dir())
        .expect("fixture folder")
        .sample(&mut rng_from_seed(seed))
        .expect("fixture pool")
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

macro_rules! check {
    ($cond:expr, $($arg:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(TestCaseError::fail(format!($($arg)*)));
        }
    };
}

// ---- color ----

/// Two-sided Kolmogorov–Smirnov distance of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Closed-form CDF of the truncated power law, written out independently
/// of the sampler.
pub fn power_law_cdf(r: f64, r_min: f64, r_max: f64, gamma: f64) -> f64 {
    let e = 1.0 - gamma;
    ((r.powf(e) - r_min.powf(e)) / (r_max.powf(e) - r_min.powf(e))).clamp(0.0, 1.0)
}

pub fn power_law_ks() -> Result<(), String> {
    let p = PowerLawParams::new(10.0, 512.0, 3.0).map_err(|e| e.to_string())?;
    let mut rng = rng_from_seed(2024);
    let mut s: Vec<f64> = (0..100_000).map(|_| sample_power_law_rng(&p, &mut rng).unwrap()).collect();
    let d = ks_statistic(&mut s, |r| power_law_cdf(r, 10.0, 512.0, 3.0));
    ensure(d < 0.01, || format!("KS statistic {d:.5}"))
}

pub fn srgb_lattice_bijective() -> Result<(), String> {
    let levels: Vec<u8> = (0..32).map(|k| ((k * 255 + 15) / 31) as u8).collect();
    for &r in &levels {
        for &g in &levels {
            for &b in &levels {
                let (back, clipped) = lab_to_srgb8(srgb_to_lab([r, g, b]));
                if back != [r, g, b] || clipped {
                    return Err(format!("{:?} -> {back:?} (clipped {clipped})", [r, g, b]));
                }
            }
        }
    }
    Ok(())
}

pub fn color_draws_are_pure() -> Result<(), String> {
    let lib = ColorLibrary::open(&fixture_dir()).map_err(|e| e.to_string())?;
    run(16, any::<u64>(), |seed| {
        let a = lib.sample(&mut rng_from_seed(seed)).unwrap();
        let b = lib.sample(&mut rng_from_seed(seed)).unwrap();
        check!(a.pixels() == b.pixels() && a.source_id() == b.source_id(), "pools differ for seed {seed}");
        let (mut ra, mut rb) = (rng_from_seed(seed ^ 1), rng_from_seed(seed ^ 1));
        for _ in 0..100 {
            check!(a.draw_color(&mut ra) == b.draw_color(&mut rb), "draws differ");
        }
        Ok(())
    })
}

// ---- geometry ----

fn retained_vertex_components(tri: &[[usize; 3]], retained: &[bool], n: usize) -> (usize, usize) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    let mut used = vec![false; n];
    for (t, &keep) in tri.iter().zip(retained) {
        if keep {
            for &v in t {
                used[v] = true;
            }
            let (a, b, c) = (find(&mut parent, t[0]), find(&mut parent, t[1]), find(&mut parent, t[2]));
            parent[b] = a;
            let c = find(&mut parent, c);
            parent[c] = find(&mut parent, a);
        }
    }
    let roots: std::collections::HashSet<usize> = (0..n).filter(|&i| used[i]).map(|i| find(&mut parent, i)).collect();
    (used.iter().filter(|&&u| u).count(), roots.len())
}

pub fn hull_properties() -> Result<(), String> {
    run(64, (10usize..100, any::<u64>(), 0.0f64..1.0, 0.0f64..1.0), |(n, seed, a1, a2)| {
        let ps = sample_points_in_disk(n, 1.0, &mut rng_from_seed(seed)).unwrap();
        let t = delaunay(&ps).unwrap();
        let full: f64 = (0..t.len()).map(|i| t.area(i)).sum();
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let mut prev = 0.0;
        for alpha in [lo, hi, 1.0] {
            let h = concave_hull(&t, alpha, true);
            let (used, comps) = retained_vertex_components(t.triangles(), &h.retained, n);
            check!(used == n, "alpha {alpha}: {} of {n} vertices dropped", n - used);
            check!(comps == 1, "alpha {alpha}: {comps} components");
            let area: f64 = (0..t.len()).filter(|&i| h.retained[i]).map(|i| t.area(i)).sum();
            check!(area <= full * (1.0 + 1e-12), "alpha {alpha}: area {area} > hull {full}");
            check!(area + 1e-12 >= prev, "area not monotone at alpha {alpha}");
            prev = area;
        }
        check!((prev - full).abs() <= 1e-12 * full, "alpha 1 is not the convex hull");
        Ok(())
    })
}

/// Direct 2-D truncated Gaussian convolution with mirror boundaries.
pub fn naive_blur(data: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return data.to_vec();
    }
    let r = (3.0 * sigma).ceil() as isize;
    let k1: Vec<f64> = (-r..=r).map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let s: f64 = k1.iter().sum();
    let k1: Vec<f64> = k1.iter().map(|v| v / s).collect();
    let refl = |i: isize, n: usize| -> usize {
        let n = n as isize;
        let m = i.rem_euclid(2 * n);
        (if m >= n { 2 * n - 1 - m } else { m }) as usize
    };
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, ky) in k1.iter().enumerate() {
                let sy = refl(y as isize + j as isize - r, h);
                for (i, kx) in k1.iter().enumerate() {
                    let sx = refl(x as isize + i as isize - r, w);
                    acc += ky * kx * data[sy * w + sx];
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}

fn to_canvas(m: &ShapeMask, side: usize, c: i64) -> Vec<bool> {
    let mut out = vec![false; side * side];
    for j in 0..m.height() {
        for i in 0..m.width() {
            if m.mask.get(i, j) {
                let (x, y) = (c + m.offset.0 + i as i64, c + m.offset.1 + j as i64);
                out[y as usize * side + x as usize] = true;
            }
        }
    }
    out
}

pub fn smoothing_is_thresholded_blur() -> Result<(), String> {
    run(24, (any::<u64>(), 0.5f64..6.0), |(seed, sigma)| {
        let sp = ShapeParams::default();
        let mut rng = rng_from_seed(seed);
        let (_, shape) = sample_shape(&sp, rng.random_range(8.0..30.0), &mut rng).unwrap();
        let smoothed = smooth_mask(&shape, sigma);
        let pad = (3.0 * sigma).ceil() as i64 + 2;
        let c = 40 + pad;
        let side = 2 * c as usize;
        let base: Vec<f64> = to_canvas(&shape, side, c).iter().map(|&b| b as u8 as f64).collect();
        let blurred = naive_blur(&base, side, side, sigma);
        let got = to_canvas(&smoothed, side, c);
        for (i, &v) in blurred.iter().enumerate() {
            if (v - 0.5).abs() > 1e-9 {
                check!(got[i] == (v >= 0.5), "pixel {i}: blurred {v} but mask {}", got[i]);
            }
        }
        Ok(())
    })
}

fn raster_on(poly: &Polygon, side: usize) -> Mask {
    let c = side as f64 / 2.0;
    rasterize(&poly.map(|p| [p[0] + c, p[1] + c]), side, side).unwrap()
}

fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    ((p[0] - a[0] - t * dx).powi(2) + (p[1] - a[1] - t * dy).powi(2)).sqrt()
}

pub fn rotation_invariance() -> Result<(), String> {
    run(24, (20usize..80, any::<u64>(), 0.2f64..0.6, 0.0f64..std::f64::consts::TAU), |(n, seed, alpha, theta)| {
        let r = 40.0;
        let side = 100;
        let ps = sample_points_in_disk(n, r, &mut rng_from_seed(seed)).unwrap();
        let poly = concave_hull(&delaunay(&ps).unwrap(), alpha, false).polygon;
        let rot = ps.rotated(theta);
        let (t0, t1) = (delaunay(&ps).unwrap(), delaunay(&rot).unwrap());
        let (h0, h1) = (concave_hull(&t0, alpha, false), concave_hull(&t1, alpha, false));
        let poly_rot = h1.polygon.clone();
        let kept = |h: &vl_core::geometry::ConcaveHull| h.retained.iter().filter(|&&k| k).count();
        let diag = format!("tris {} vs {}, kept {} vs {}", t0.len(), t1.len(), kept(&h0), kept(&h1));
        let direct = raster_on(&poly_rot, side);
        let plain = raster_on(&poly, side);
        let c = side as f64 / 2.0;
        let (s, co) = theta.sin_cos();
        let rotated = Mask::from_fn(side, side, |x, y| {
            let (u, v) = (x as f64 + 0.5 - c, y as f64 + 0.5 - c);
            let (sx, sy) = (co * u + s * v + c, -s * u + co * v + c);
            sx >= 0.0 && sy >= 0.0 && (sx as usize) < side && (sy as usize) < side && plain.get(sx as usize, sy as usize)
        });
        let near = |x: f64, y: f64| {
            poly_rot.rings.iter().any(|ring| {
                (0..ring.len()).any(|i| seg_dist([x - c, y - c], ring[i], ring[(i + 1) % ring.len()]) <= 2.0)
            })
        };
        for y in 0..side {
            for x in 0..side {
                if direct.get(x, y) != rotated.get(x, y) {
                    check!(near(x as f64 + 0.5, y as f64 + 0.5), "mismatch at ({x},{y}) far from the boundary; {diag}");
                }
            }
        }
        Ok(())
    })
}

pub fn shapes_are_deterministic() -> Result<(), String> {
    run(32, (any::<u64>(), 10.0f64..100.0), |(seed, radius)| {
        let sp = ShapeParams::default();
        let a = sample_shape(&sp, radius, &mut rng_from_seed(seed)).unwrap();
        let b = sample_shape(&sp, radius, &mut rng_from_seed(seed)).unwrap();
        check!(a == b, "seed {seed} radius {radius}");
        Ok(())
    })
}

// ---- textures ----

pub fn fields_in_unit_range() -> Result<(), String> {
    let tp = TextureParams::default();
    run(48, any::<u64>(), |seed| {
        let pp = sample_periodic_params(&tp, &mut rng_from_seed(seed));
        let f = periodic_field(&pp, 48, 40);
        check!(f.data().iter().all(|v| (0.0..=1.0).contains(v)), "field outside [0,1] for {pp:?}");
        Ok(())
    })
}

pub fn textures_stay_in_gamut() -> Result<(), String> {
    let tp = TextureParams::default();
    let mut total = 0usize;
    let mut clipped = 0usize;
    for k in 0..240u64 {
        let src = fixture_pool(derive_seed(7, k));
        let mut rng = rng_from_seed(derive_seed(8, k));
        let (w, h) = (rng.random_range(16..96), rng.random_range(16..96));
        let (_, img) = sample_texture(&tp, &src, w, h, &mut rng).map_err(|e| e.to_string())?;
        for i in 0..w * h {
            let lab = LabColor::new(img.plane(0)[i], img.plane(1)[i], img.plane(2)[i]);
            clipped += lab_to_srgb8(lab).1 as usize;
        }
        total += w * h;
    }
    let frac = clipped as f64 / total as f64;
    ensure(frac < 0.01, || format!("{:.3}% of texture pixels clamped", 100.0 * frac))
}

/// Slope fitted to the mean spectrum of the `L` planes of `seeds` micro
/// textures.
pub fn micro_slope(gamma: f64, seeds: u64, size: usize) -> (f64, f64) {
    let src = fixture_pool(3);
    let planes: Vec<Gray> = (0..seeds)
        .map(|s| {
            let t = micro_texture(&MicroParams { gamma }, &src, size, &mut rng_from_seed(derive_seed(gamma.to_bits(), s)))
                .unwrap();
            Gray::new(size, size, t.plane(0).iter().map(|&v| v as f64).collect()).unwrap()
        })
        .collect();
    let fit = fit_slope_default(&radial_spectrum(&planes).unwrap()).unwrap();
    (fit.gamma, fit.r2)
}

pub fn micro_spectral_slopes() -> Result<(), String> {
    for gamma in [0.5, 1.0, 1.5, 2.0, 2.5] {
        let (g, _) = micro_slope(gamma, 20, 256);
        ensure((g - gamma).abs() <= 0.1, || format!("gamma {gamma}: fitted {g:.4}"))?;
    }
    Ok(())
}

pub fn psnr(a: &[f32], b: &[f32], peak: f64) -> f64 {
    let mse = a.iter().zip(b).map(|(&x, &y)| ((x - y) as f64).powi(2)).sum::<f64>() / a.len() as f64;
    10.0 * (peak * peak / mse.max(1e-30)).log10()
}

pub fn homography_round_trip() -> Result<(), String> {
    let n = 128;
    let img = RasterImage::from_planes(
        ColorSpace::Lab,
        vec![Field::from_fn(n, n, |x, y| {
            50.0 + 30.0 * (x as f32 / 9.0).sin() * (y as f32 / 13.0).cos()
        })],
    )
    .unwrap();
    run(24, prop::array::uniform8(-0.08f64..0.08), |j| {
        let src = HomographyCorners::image_corners(n, n);
        let mut dst = src;
        for (k, p) in dst.iter_mut().enumerate() {
            p[0] += j[2 * k] * n as f64;
            p[1] += j[2 * k + 1] * n as f64;
        }
        let fwd = HomographyCorners { src, dst };
        let inv = HomographyCorners { src: dst, dst: src };
        let h = solve_homography(&fwd).unwrap();
        let back = perspective_warp(&perspective_warp(&img, &fwd).unwrap(), &inv).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for y in 0..n {
            for x in 0..n {
                let q = h.apply([x as f64 + 0.5, y as f64 + 0.5]);
                if q.iter().all(|&v| (2.0..n as f64 - 2.0).contains(&v)) {
                    a.push(back.get(x, y, 0));
                    b.push(img.get(x, y, 0));
                }
            }
        }
        check!(a.len() > n * n / 2, "too few interior pixels");
        let p = psnr(&a, &b, 100.0);
        check!(p > 30.0, "round trip PSNR {p:.2} dB");
        Ok(())
    })
}

pub fn rotated_field_is_analytic() -> Result<(), String> {
    let tp = TextureParams::default();
    run(48, (any::<u64>(), -200.0f64..200.0, -200.0f64..200.0), |(seed, x, y)| {
        let mut pp = sample_periodic_params(&tp, &mut rng_from_seed(seed));
        pp.warp = None;
        let theta = pp.theta;
        pp.theta = 0.0;
        let plain = pp.eval(x, y);
        pp.theta = theta;
        let (s, c) = theta.sin_cos();
        let rotated = pp.eval(c * x - s * y, s * x + c * y);
        check!((plain - rotated).abs() < 1e-9, "{plain} vs {rotated} at theta {theta}");
        Ok(())
    })
}

pub fn texture_branch_frequencies() -> Result<(), String> {
    let mix = TextureMix::default();
    let mut rng = rng_from_seed(31);
    let mut counts = [0usize; 3];
    let n = 10_000;
    for _ in 0..n {
        match mix.pick(rng.random()) {
            TextureKind::Periodic => counts[0] += 1,
            TextureKind::Micro => counts[1] += 1,
            TextureKind::TwoScale => counts[2] += 1,
            TextureKind::Flat => return Err("flat branch drawn from the default mix".into()),
        }
    }
    for (c, want) in counts.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
        let f = *c as f64 / n as f64;
        ensure((f - want).abs() <= 0.02, || format!("frequency {f:.4} vs {want:.4}"))?;
    }
    Ok(())
}

// ---- compositing ----

pub fn occlusion_partition() -> Result<(), String> {
    run(8, (any::<u64>(), 0.2f64..1.0), |(seed, p)| {
        let src = fixture_pool(seed);
        let layer = leaves_stack(p, 96, &src, &StackParams::default(), seed).unwrap();
        let mut counts = std::collections::HashMap::new();
        for (i, &l) in layer.labels.iter().enumerate() {
            check!((l > 0) == layer.mask.data()[i], "label/mask disagree at {i}");
            if l > 0 {
                *counts.entry(l - 1).or_insert(0usize) += 1;
            }
        }
        check!(counts.len() == layer.visible.len(), "visible list size");
        for leaf in &layer.visible {
            check!(counts.get(&(leaf.index as u32)) == Some(&leaf.visible_pixels), "leaf {} pixel count", leaf.index);
        }
        check!(layer.mask.count() as f64 >= p * 96.0 * 96.0, "coverage below target");
        Ok(())
    })
}

pub fn random_layer(w: usize, seed: u64, fill: f64) -> (Image64, Mask) {
    let mut rng = rng_from_seed(seed);
    let mask = Mask::from_fn(w, w, |_, _| rng.random::<f64>() < fill);
    let mut img = Image64::new(w, w, 3, ColorSpace::Lab);
    for c in 0..3 {
        for y in 0..w {
            for x in 0..w {
                if mask.get(x, y) {
                    img.set(x, y, c, rng.random_range(-80.0..100.0));
                }
            }
        }
    }
    (img, mask)
}

/// Largest deviation of [`fuse_three_planes`] from the nested formula
/// evaluated with direct 2-D convolutions.
pub fn fusion_oracle_max_diff(i3: &Image64, i2: &Image64, m2: &Mask, i1: &Image64, m1: &Mask, d: &DofParams) -> f64 {
    let (w, h) = (i3.width(), i3.height());
    let got = fuse_three_planes(i3, i2, m2, i1, m1, d).unwrap();
    let mask_f = |m: &Mask| m.data().iter().map(|&v| v as u8 as f64).collect::<Vec<_>>();
    let e1 = naive_blur(&mask_f(m1), w, h, d.sigma1);
    let e2 = naive_blur(&mask_f(m2), w, h, d.sigma3);
    let mut worst = 0.0f64;
    for c in 0..i3.channels() {
        let b3 = naive_blur(i3.plane(c), w, h, d.sigma3);
        let f1 = naive_blur(i1.plane(c), w, h, d.sigma1);
        for i in 0..w * h {
            let back = b3[i] * (1.0 - e2[i]) + i2.plane(c)[i];
            let want = back * (1.0 - e1[i]) + f1[i];
            worst = worst.max((got.plane(c)[i] - want).abs());
        }
    }
    worst
}

/// Back, middle and front layers of a fixed-seed scene of side `w`.
pub fn scene_layers(w: usize, seed: u64) -> [(Image64, Mask); 3] {
    let src = fixture_pool(seed);
    let sp = StackParams::default();
    let layer = |p: f64, k: u64| {
        let l = leaves_stack(p, w, &src, &sp, derive_seed(seed, k)).unwrap();
        (Image64::from_raster(&l.stack), l.mask)
    };
    [layer(1.0, 0), layer(0.5, 1), layer(0.25, 2)]
}

/// Andrew's monotone chain, without collinear points.
pub fn convex_hull_points(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

pub fn shoelace(ring: &[[f64; 2]]) -> f64 {
    (0..ring.len())
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

/// The α=1 hull of `n` random points against the monotone chain: same
/// area and same vertex set.
pub fn alpha_one_is_convex_hull(n: usize, seed: u64) -> Result<(), String> {
    let ps = sample_points_in_disk(n, 50.0, &mut rng_from_seed(seed)).map_err(|e| e.to_string())?;
    let t = delaunay(&ps).map_err(|e| e.to_string())?;
    let h = concave_hull(&t, 1.0, true);
    ensure(h.retained.iter().all(|&k| k), || "triangles removed at alpha 1".into())?;
    ensure(h.polygon.rings.len() == 1, || format!("{} rings", h.polygon.rings.len()))?;
    let ring = &h.polygon.rings[0];
    let want = convex_hull_points(&ps.points);
    let (a, b) = (shoelace(ring), shoelace(&want));
    ensure((a - b).abs() <= 1e-9 * b, || format!("area {a} vs {b}"))?;
    let key = |p: &[f64; 2]| (p[0].to_bits(), p[1].to_bits());
    let got: std::collections::BTreeSet<_> = ring.iter().map(key).collect();
    let want: std::collections::BTreeSet<_> = want.iter().map(key).collect();
    ensure(got == want, || format!("{} hull vertices vs {}", got.len(), want.len()))
}

pub fn delta_kernels_are_painter() -> Result<(), String> {
    run(32, (any::<u64>(), 0.0f64..1.0), |(seed, fill)| {
        let (b, _) = random_layer(24, seed, 1.0);
        let (f, m) = random_layer(24, seed ^ 0xABCD, fill);
        let out = dof_compose(&b, 0.0, &f, 0.0, &m).unwrap();
        for c in 0..3 {
            for i in 0..24 * 24 {
                let want = if m.data()[i] { f.plane(c)[i] } else { b.plane(c)[i] };
                check!(out.plane(c)[i].to_bits() == want.to_bits(), "pixel {i} channel {c}");
            }
        }
        Ok(())
    })
}

fn support_mean_l(img: &Image64, m: Option<&Mask>) -> f64 {
    let l = img.plane(0);
    let (mut s, mut n) = (0.0, 0usize);
    for (i, &v) in l.iter().enumerate() {
        if m.is_none_or(|m| m.data()[i]) {
            s += v;
            n += 1;
        }
    }
    s / n.max(1) as f64
}

pub fn energy_sanity() -> Result<(), String> {
    run(8, (any::<u64>(), 0.0f64..10.0), |(seed, sigma)| {
        let src = fixture_pool(seed);
        let sp = StackParams::default();
        let w = 128;
        let back = leaves_stack(1.0, w, &src, &sp, derive_seed(seed, 0)).unwrap();
        let mid = leaves_stack(0.5, w, &src, &sp, derive_seed(seed, 1)).unwrap();
        let front = leaves_stack(0.25, w, &src, &sp, derive_seed(seed, 2)).unwrap();
        let (i3, i2, i1) = (
            Image64::from_raster(&back.stack),
            Image64::from_raster(&mid.stack),
            Image64::from_raster(&front.stack),
        );
        let d = DofParams { sigma1: sigma, sigma3: sigma };
        let fused = fuse_three_planes(&i3, &i2, &mid.mask, &i1, &front.mask, &d).unwrap();
        let means = [
            support_mean_l(&i3, None),
            support_mean_l(&i2, Some(&mid.mask)),
            support_mean_l(&i1, Some(&front.mask)),
        ];
        let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let got = support_mean_l(&fused, None);
        check!(got >= lo - 1.0 && got <= hi + 1.0, "fused mean L {got:.3} outside [{lo:.3}, {hi:.3}] ± 1");
        Ok(())
    })
}

pub fn generation_is_deterministic() -> Result<(), String> {
    use vl_core::compositing::{Generator, VlConfig};
    let cfg = VlConfig {
        canvas: 96,
        colors: Some(fixture_dir()),
        ..VlConfig::default()
    };
    let g = Generator::new(cfg).map_err(|e| e.to_string())?;
    for seed in [1u64, 2, 3] {
        let a = g.generate(seed).map_err(|e| e.to_string())?;
        let b = g.generate(seed).map_err(|e| e.to_string())?;
        ensure(a.image.data() == b.image.data() && a.record == b.record, || format!("seed {seed} differs"))?;
    }
    Ok(())
}

// ---- stats ----

fn hist_from(counts: Vec<u64>) -> GradHistogram {
    let mut h = GradHistogram::new(counts.len(), GRAD_MAX);
    h.counts = counts;
    h
}

pub fn kl_properties() -> Result<(), String> {
    let counts = || prop::collection::vec(0u64..1000, GRAD_BINS);
    run(128, (counts(), counts()), |(a, b)| {
        let (p, q) = (hist_from(a.clone()), hist_from(b.clone()));
        let pq = kl_divergence(&p, &q).unwrap();
        check!(pq >= -1e-12, "KL {pq} < 0");
        check!(kl_divergence(&p, &p).unwrap().abs() < 1e-12, "KL(p,p) != 0");
        let same = p.densities() == q.densities();
        check!(same || pq > 0.0, "distinct densities with zero KL");
        Ok(())
    })
}

fn random_gray(n: usize, seed: u64) -> Gray {
    let mut rng = rng_from_seed(seed);
    let base = Gray::from_fn(n, n, |_, _| rng.random::<f64>());
    let mut acc = vec![0.0; n * n];
    // Running sums along x give a red, roughly power-law spectrum.
    for y in 0..n {
        let mut s = 0.0;
        for x in 0..n {
            s += base.get(x, y) - 0.5;
            acc[y * n + x] = s;
        }
    }
    Gray::new(n, n, acc).unwrap()
}

pub fn slope_scale_invariance() -> Result<(), String> {
    run(32, (any::<u64>(), 0.01f64..100.0), |(seed, k)| {
        let g = random_gray(64, seed);
        let a = fit_slope_default(&radial_spectrum(std::slice::from_ref(&g)).unwrap()).unwrap();
        let b = fit_slope_default(&radial_spectrum(&[g.map(|v| k * v)]).unwrap()).unwrap();
        check!((a.gamma - b.gamma).abs() < 1e-9, "{} vs {}", a.gamma, b.gamma);
        check!((a.r2 - b.r2).abs() < 1e-9, "r2 {} vs {}", a.r2, b.r2);
        Ok(())
    })
}

pub fn spectrum_rotation_invariance() -> Result<(), String> {
    run(32, (any::<u64>(), prop::sample::select(vec![15usize, 16, 31, 48])), |(seed, n)| {
        let g = random_gray(n, seed);
        let a = radial_spectrum(std::slice::from_ref(&g)).unwrap();
        let b = radial_spectrum(&[g.rot90()]).unwrap();
        check!(a.counts == b.counts, "annulus counts differ");
        let scale = a.power.iter().cloned().fold(0.0, f64::max);
        for (x, y) in a.power.iter().zip(&b.power) {
            check!((x - y).abs() <= 1e-9 * scale, "{x} vs {y}");
        }
        Ok(())
    })
}

pub fn gradient_offset_invariance() -> Result<(), String> {
    run(64, (any::<u64>(), -256i32..256), |(seed, k)| {
        let mut rng = rng_from_seed(seed);
        let g = Gray::from_fn(40, 33, |_, _| rng.random_range(0..1024) as f64 / 1024.0);
        let shifted = g.map(|v| v + k as f64 / 1024.0);
        check!(
            gradient_hist_full(&[g]).counts == gradient_hist_full(&[shifted]).counts,
            "offset {k} changed the histogram"
        );
        Ok(())
    })
}
