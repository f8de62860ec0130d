//! Values checked against references built independently of the library.

mod suite;

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use vl_core::color::{srgb_to_lab, ColorSource};
use vl_core::compositing::DofParams;
use vl_core::rng::rng_from_seed;
use vl_core::textures::{render_texture, sample_texture_spec, TextureKind, TextureMix, TextureParams};

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for r in 0..3 {
            mk[r][k] = b[r];
        }
        *xk = det(mk) / d;
    }
    x
}

/// sRGB to Lab from the primaries' chromaticities and the D65 white point.
fn reference_lab(rgb: [u8; 3]) -> [f64; 3] {
    let prim = [[0.64, 0.33], [0.30, 0.60], [0.15, 0.06]];
    let white_xy = [0.3127, 0.3290];
    let xyz = |xy: [f64; 2]| [xy[0] / xy[1], 1.0, (1.0 - xy[0] - xy[1]) / xy[1]];
    let cols: Vec<[f64; 3]> = prim.iter().map(|&p| xyz(p)).collect();
    let basis = [
        [cols[0][0], cols[1][0], cols[2][0]],
        [cols[0][1], cols[1][1], cols[2][1]],
        [cols[0][2], cols[1][2], cols[2][2]],
    ];
    let white = xyz(white_xy);
    let s = solve3(basis, white);
    let lin = |v: u8| {
        let c = v as f64 / 255.0;
        if c <= 0.04045 {
            c / 12.92
        } else {
            ((c + 0.055) / 1.055).powf(2.4)
        }
    };
    let l = [lin(rgb[0]), lin(rgb[1]), lin(rgb[2])];
    let mut t = [0.0; 3];
    for r in 0..3 {
        t[r] = (0..3).map(|k| basis[r][k] * s[k] * l[k]).sum::<f64>() / white[r];
    }
    let f = |t: f64| {
        let d: f64 = 6.0 / 29.0;
        if t > d.powi(3) {
            t.cbrt()
        } else {
            t / (3.0 * d * d) + 4.0 / 29.0
        }
    };
    let (fx, fy, fz) = (f(t[0]), f(t[1]), f(t[2]));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

#[test]
fn lab_matches_chromaticity_reference() {
    let red = srgb_to_lab([255, 0, 0]);
    let want = reference_lab([255, 0, 0]);
    for (got, want) in [red.l, red.a, red.b].iter().zip(want) {
        assert!((*got as f64 - want).abs() < 0.02, "red: {got} vs {want}");
    }
    let mut rng = rng_from_seed(5);
    for _ in 0..1000 {
        let rgb: [u8; 3] = rng.random();
        let got = srgb_to_lab(rgb);
        let want = reference_lab(rgb);
        for (g, w) in [got.l, got.a, got.b].iter().zip(want) {
            assert!((*g as f64 - w).abs() < 0.02, "{rgb:?}: {g} vs {w}");
        }
    }
}

#[test]
fn forced_micro_branch_matches_source_marginal() {
    let src: ColorSource = suite::fixture_pool(11);
    let tp = TextureParams {
        mix: TextureMix {
            periodic: 0.0,
            micro: 1.0,
            two_scale: 0.0,
        },
        ..TextureParams::default()
    };
    let bins = 20;
    let bin = |l: f32| ((l as f64 / 100.0 * bins as f64) as usize).min(bins - 1);
    let mut expected = vec![0.0f64; bins];
    for c in src.pixels() {
        expected[bin(c.l)] += 1.0;
    }
    let total: f64 = expected.iter().sum();
    let mut rng = rng_from_seed(12);
    let mut p_values = Vec::new();
    for _ in 0..10 {
        let spec = sample_texture_spec(&tp, &src, 64, 64, &mut rng);
        assert_eq!(spec.kind(), TextureKind::Micro);
        let tex = render_texture(&spec, &src, 64, 64).unwrap();
        let pool: std::collections::HashSet<[u32; 3]> =
            src.pixels().iter().map(|c| c.to_array().map(f32::to_bits)).collect();
        let mut observed = vec![0.0f64; bins];
        for i in 0..64 * 64 {
            let px = [tex.plane(0)[i], tex.plane(1)[i], tex.plane(2)[i]];
            assert!(pool.contains(&px.map(f32::to_bits)), "pixel {i} is not a pool color");
            observed[bin(px[0])] += 1.0;
        }
        let n: f64 = observed.iter().sum();
        let (mut chi2, mut dof) = (0.0, 0usize);
        let (mut e_acc, mut o_acc) = (0.0, 0.0);
        for (e, o) in expected.iter().zip(&observed) {
            e_acc += e / total * n;
            o_acc += o;
            if e_acc >= 5.0 {
                chi2 += (o_acc - e_acc).powi(2) / e_acc;
                dof += 1;
                e_acc = 0.0;
                o_acc = 0.0;
            }
        }
        if e_acc > 0.0 {
            chi2 += (o_acc - e_acc).powi(2) / e_acc;
            dof += 1;
        }
        let p = 1.0 - ChiSquared::new((dof - 1) as f64).unwrap().cdf(chi2);
        p_values.push(p);
    }
    // With ten tests at the 1% level, more than one rejection is itself
    // unlikely (p ≈ 0.004).
    let rejected = p_values.iter().filter(|&&p| p <= 0.01).count();
    assert!(rejected <= 1, "p-values {p_values:?}");
}

#[test]
fn fusion_matches_direct_convolution() {
    let w = 128;
    let (i3, _) = suite::random_layer(w, 1, 1.0);
    let (i2, m2) = suite::random_layer(w, 2, 0.5);
    let (i1, m1) = suite::random_layer(w, 3, 0.25);
    let [(s3, _), (s2, sm2), (s1, sm1)] = suite::scene_layers(w, 4);
    for (s1_, s3_) in [(0.0, 0.0), (1.3, 0.0), (0.0, 2.2), (3.1, 4.7)] {
        let d = DofParams { sigma1: s1_, sigma3: s3_ };
        let worst = suite::fusion_oracle_max_diff(&i3, &i2, &m2, &i1, &m1, &d);
        assert!(worst < 1e-6, "noise layers, sigma ({s1_}, {s3_}): max difference {worst}");
        let worst = suite::fusion_oracle_max_diff(&s3, &s2, &sm2, &s1, &sm1, &d);
        assert!(worst < 1e-6, "scene layers, sigma ({s1_}, {s3_}): max difference {worst}");
    }
}

#[test]
fn alpha_one_matches_monotone_chain() {
    for k in 0..100u64 {
        suite::alpha_one_is_convex_hull(10 + (k as usize * 7) % 91, k).unwrap();
    }
}
