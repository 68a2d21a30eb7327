//! Independent scalar oracles, written from the raw published constants
//! without touching the library's precomputed matrices, plus golden values
//! frozen from a separate evaluation of the same chain.

use cvd_core::color::{rgb_to_lab, srgb_decode, srgb_encode, ImageBuffer, PixelSrgb};
use cvd_core::correct::{
    apply_recipe, confusion_mask, desaturate_helper, edge_enhance_confusable, luminance_equalize,
    passive_filter, CorrectionRecipe, DEFAULT_EDGE_COLOR,
};
use cvd_core::simulate::{
    confusion_distance, simulate_image, simulate_pixel, Deficiency, DeficiencyProfile,
};
use cvd_core::spectral::{render_rainbow, wavelength_to_rgb, RainbowSpec};

type M3 = [[f64; 3]; 3];

const SRGB_XYZ: M3 = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];
const HPE: M3 = [
    [0.4002, 0.7076, -0.0808],
    [-0.2263, 1.1653, 0.0457],
    [0.0, 0.0, 0.9182],
];

fn mul(a: &M3, b: &M3) -> M3 {
    let mut o = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                o[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    o
}

fn apply(m: &M3, v: [f64; 3]) -> [f64; 3] {
    let mut o = [0.0; 3];
    for i in 0..3 {
        for k in 0..3 {
            o[i] += m[i][k] * v[k];
        }
    }
    o
}

// adjugate / determinant
fn inverse(m: &M3) -> M3 {
    let c =
        |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let cof = [
        [c(1, 2, 1, 2), -c(1, 2, 0, 2), c(1, 2, 0, 1)],
        [-c(0, 2, 1, 2), c(0, 2, 0, 2), -c(0, 2, 0, 1)],
        [c(0, 1, 1, 2), -c(0, 1, 0, 2), c(0, 1, 0, 1)],
    ];
    let det: f64 = (0..3).map(|j| m[0][j] * cof[0][j]).sum();
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = cof[j][i] / det;
        }
    }
    inv
}

fn decode(c: u8) -> f64 {
    let v = c as f64 / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn encode(x: f64) -> u8 {
    let x = x.clamp(0.0, 1.0);
    let v = if x <= 0.0031308 {
        12.92 * x
    } else {
        1.055 * x.powf(1.0 / 2.4) - 0.055
    };
    (v * 255.0).round() as u8
}

/// Hand chain: decode, LMS, solve the two-anchor projection by Cramer's
/// rule, blend, back to RGB, encode.
fn oracle_simulate(p: PixelSrgb, kind: Deficiency, severity: f64) -> PixelSrgb {
    let to_lms = mul(&HPE, &SRGB_XYZ);
    let to_rgb = inverse(&to_lms);
    let lin = [decode(p.r), decode(p.g), decode(p.b)];
    let out = if kind == Deficiency::Monochromacy {
        let y = 0.2126729 * lin[0] + 0.7151522 * lin[1] + 0.0721750 * lin[2];
        [y, y, y]
    } else {
        let (lost, anchor_rgb) = match kind.dichromat().unwrap() {
            Deficiency::Protanopia => (0, [0.0, 0.0, 1.0]),
            Deficiency::Deuteranopia => (1, [0.0, 0.0, 1.0]),
            _ => (2, [1.0, 0.0, 0.0]),
        };
        let white = apply(&to_lms, [1.0, 1.0, 1.0]);
        let anchor = apply(&to_lms, anchor_rgb);
        let keep: Vec<usize> = (0..3).filter(|&i| i != lost).collect();
        let (a11, a12, a21, a22) = (
            white[keep[0]],
            white[keep[1]],
            anchor[keep[0]],
            anchor[keep[1]],
        );
        let det = a11 * a22 - a12 * a21;
        let ca = (white[lost] * a22 - a12 * anchor[lost]) / det;
        let cb = (a11 * anchor[lost] - white[lost] * a21) / det;
        let mut lms = apply(&to_lms, lin);
        lms[lost] = ca * lms[keep[0]] + cb * lms[keep[1]];
        let proj = apply(&to_rgb, lms);
        [
            (1.0 - severity) * lin[0] + severity * proj[0],
            (1.0 - severity) * lin[1] + severity * proj[1],
            (1.0 - severity) * lin[2] + severity * proj[2],
        ]
    };
    PixelSrgb::new(encode(out[0]), encode(out[1]), encode(out[2]))
}

#[test]
fn lab_of_pure_red() {
    // evaluated separately from the sRGB -> XYZ -> Lab chain
    let lab = rgb_to_lab(PixelSrgb::new(255, 0, 0));
    assert!((lab.l_star - 53.240_791_833_280_88).abs() < 1e-9);
    assert!((lab.a_star - 80.092_469_544_800_42).abs() < 1e-9);
    assert!((lab.b_star - 67.203_192_536_497_27).abs() < 1e-9);
}

#[test]
fn golden_dichromat_primaries() {
    let cases = [
        (
            Deficiency::Protanopia,
            [(255, 0, 0), (0, 255, 0), (0, 0, 255)],
            [(115, 115, 0), (235, 235, 14), (0, 0, 255)],
        ),
        (
            Deficiency::Deuteranopia,
            [(255, 0, 0), (0, 255, 0), (0, 0, 255)],
            [(156, 156, 0), (214, 214, 46), (0, 0, 255)],
        ),
        (
            Deficiency::Tritanopia,
            [(255, 0, 0), (0, 255, 0), (0, 0, 255)],
            [(255, 0, 0), (100, 240, 240), (0, 99, 99)],
        ),
    ];
    for (kind, inputs, expected) in cases {
        let prof = DeficiencyProfile::full(kind);
        for (i, e) in inputs.into_iter().zip(expected) {
            let got = simulate_pixel(PixelSrgb::from([i.0, i.1, i.2]), &prof);
            assert_eq!(got, PixelSrgb::from([e.0, e.1, e.2]), "{kind} {i:?}");
        }
    }
}

#[test]
fn golden_confusion_distance_of_red() {
    let d = confusion_distance(
        PixelSrgb::new(255, 0, 0),
        &DeficiencyProfile::full(Deficiency::Protanopia),
    );
    assert!((d - 93.453_823_130_665_5).abs() < 1e-6, "{d}");
    assert!(d > 20.0);
}

#[test]
fn library_matches_hand_chain_on_color_cube() {
    let levels: Vec<u8> = (0..16).map(|i| (i * 17) as u8).collect();
    for kind in Deficiency::ALL {
        for severity in [0.0, 0.25, 0.5, 1.0] {
            let prof = DeficiencyProfile::new(kind, severity).unwrap();
            let sev = prof.severity();
            for &r in &levels {
                for &g in &levels {
                    for &b in &levels {
                        let p = PixelSrgb::new(r, g, b);
                        let lib = simulate_pixel(p, &prof);
                        let ora = oracle_simulate(p, kind, sev);
                        for (x, y) in lib.channels().into_iter().zip(ora.channels()) {
                            assert!(
                                (x as i32 - y as i32).abs() <= 1,
                                "{kind}@{sev} {p:?}: {lib:?} vs {ora:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn wavelength_oracle_dominant_channels() {
    let g = wavelength_to_rgb(540.0);
    assert!(g.g > g.r && g.g > g.b);
    let r = wavelength_to_rgb(700.0);
    assert!(r.r > r.g && r.r > r.b);
    let img = render_rainbow(&RainbowSpec::new(750, 10)).unwrap();
    let left = img.get(0, 0);
    let right = img.get(749, 0);
    assert!(left.r > left.g && left.r > left.b, "{left:?}");
    assert!(right.b > right.r && right.b > right.g, "{right:?}");
}

#[test]
fn rainbow_red_end_darkens_under_protanopia() {
    let spec = RainbowSpec::new(750, 4);
    let img = render_rainbow(&spec).unwrap();
    let sim = simulate_image(&img, &DeficiencyProfile::full(Deficiency::Protanopia));
    let (mut before, mut after, mut n) = (0.0, 0.0, 0);
    for x in 0..spec.width {
        if spec.wavelength_at(x) > 620.0 {
            before += srgb_decode(img.get(x, 0)).luminance();
            after += srgb_decode(sim.get(x, 0)).luminance();
            n += 1;
        }
    }
    assert!(n > 0);
    let drop = 1.0 - after / before;
    assert!(drop >= 0.25, "drop {drop}");
}

#[test]
fn passive_filter_on_white_is_pink() {
    let white = ImageBuffer::filled(1, 1, PixelSrgb::WHITE).unwrap();
    let out = passive_filter(&white, 0.2).unwrap().get(0, 0);
    // encode(0.2) evaluated by hand
    assert_eq!(out, PixelSrgb::new(255, encode(0.2), 255));
    assert_eq!(out, PixelSrgb::new(255, 124, 255));
}

#[test]
fn filter_then_desaturate_recipe() {
    let src = ImageBuffer::new(
        2,
        2,
        vec![
            PixelSrgb::new(255, 0, 0),
            PixelSrgb::new(0, 255, 0),
            PixelSrgb::new(30, 200, 120),
            PixelSrgb::new(90, 90, 250),
        ],
    )
    .unwrap();
    let recipe = CorrectionRecipe::parse_text("passive_filter:attenuation=0.2,desaturate").unwrap();
    let out = apply_recipe(&src, &recipe, None, 0).unwrap();
    // filtered greens: 0 -> 0, 255 -> 124, 200 -> 95, 90 -> 39; gray level is the max channel
    let expected: Vec<PixelSrgb> = [255, 124, 120, 250]
        .into_iter()
        .map(PixelSrgb::gray)
        .collect();
    assert_eq!(out.pixels(), expected.as_slice());
    assert_eq!(out, desaturate_helper(&passive_filter(&src, 0.2).unwrap()));
}

#[test]
fn equalize_pure_red_clamps() {
    let src = ImageBuffer::filled(3, 3, PixelSrgb::new(255, 0, 0)).unwrap();
    let prof = DeficiencyProfile::full(Deficiency::Protanopia);
    // v = 1.0 already; 1.3 x 1.0 clamps back to 1.0
    assert_eq!(luminance_equalize(&src, &prof, 1.3).unwrap(), src);
    let gray = ImageBuffer::filled(3, 3, PixelSrgb::gray(100)).unwrap();
    assert_eq!(luminance_equalize(&gray, &prof, 2.5).unwrap(), gray);
}

#[test]
fn half_red_mask() {
    let img = ImageBuffer::from_fn(8, 4, |x, _| {
        if x < 4 {
            PixelSrgb::new(255, 0, 0)
        } else {
            PixelSrgb::gray(128)
        }
    })
    .unwrap();
    let mask =
        confusion_mask(&img, &DeficiencyProfile::full(Deficiency::Protanopia), 10.0).unwrap();
    for y in 0..4 {
        for x in 0..8 {
            assert_eq!(mask.get(x, y), x < 4);
        }
    }
}

#[test]
fn red_disc_gets_a_ring() {
    let (w, h, cx, cy, r) = (48u32, 48u32, 24.0, 24.0, 12.0);
    let inside = |x: u32, y: u32| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        (dx * dx + dy * dy).sqrt()
    };
    let img = ImageBuffer::from_fn(w, h, |x, y| {
        if inside(x, y) < r {
            PixelSrgb::new(255, 0, 0)
        } else {
            PixelSrgb::gray(128)
        }
    })
    .unwrap();
    let prof = DeficiencyProfile::full(Deficiency::Protanopia);
    let out = edge_enhance_confusable(&img, &prof, DEFAULT_EDGE_COLOR);
    let mut ring = 0;
    for y in 0..h {
        for x in 0..w {
            let d = inside(x, y);
            let changed = out.get(x, y) != img.get(x, y);
            if changed {
                ring += 1;
                // within 2 px of the boundary on either side
                assert!((d - r).abs() < 2.0, "edge at distance {d}");
                assert_eq!(out.get(x, y), DEFAULT_EDGE_COLOR);
            }
            if (d - r).abs() > 2.5 {
                assert!(!changed);
            }
        }
    }
    assert!(ring > 0);
    // every boundary crossing along the horizontal diameter is marked, 1-3 px thick
    let row = cy as u32;
    let marked: Vec<u32> = (0..w)
        .filter(|&x| out.get(x, row) == DEFAULT_EDGE_COLOR)
        .collect();
    let left: Vec<_> = marked.iter().filter(|&&x| x < cx as u32).collect();
    let right: Vec<_> = marked.iter().filter(|&&x| x >= cx as u32).collect();
    assert!((1..=3).contains(&left.len()), "{marked:?}");
    assert!((1..=3).contains(&right.len()), "{marked:?}");
}

#[test]
fn gray_shapes_have_no_edges() {
    let img = ImageBuffer::from_fn(20, 20, |x, y| {
        if (5..12).contains(&x) && (5..15).contains(&y) {
            PixelSrgb::gray(30)
        } else {
            PixelSrgb::gray(220)
        }
    })
    .unwrap();
    for kind in Deficiency::ALL {
        let out = edge_enhance_confusable(&img, &DeficiencyProfile::full(kind), DEFAULT_EDGE_COLOR);
        assert_eq!(out, img, "{kind}");
    }
}

#[test]
fn encode_matches_formula_everywhere_on_codes() {
    for c in 0..=255u8 {
        assert_eq!(
            srgb_encode(srgb_decode(PixelSrgb::gray(c))),
            PixelSrgb::gray(encode(decode(c)))
        );
    }
}
