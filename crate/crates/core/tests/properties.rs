use proptest::prelude::*;

use cvd_core::augment::{fuse_band, fuse_pentachromatic, AugmentConfig, BandImage};
use cvd_core::color::{
    decode_channel, delta_e, encode_channel, hsv_to_rgb, lms_to_rgb, rgb_to_hsv, rgb_to_lab,
    rgb_to_lms, srgb_decode, HsvTriple, ImageBuffer, LabTriple, LinearRgb, PixelSrgb,
};
use cvd_core::correct::{
    apply_recipe, blink_overlay, confusion_mask, desaturate_helper, passive_filter,
    red_channel_grayscale, BlinkState, CorrectionRecipe, Operator, RegionMask,
};
use cvd_core::simulate::{
    confusion_distance, simulate_image, simulate_pixel, Deficiency, DeficiencyProfile,
};
use cvd_core::spectral::ConeClass;

fn pixel() -> impl Strategy<Value = PixelSrgb> {
    any::<[u8; 3]>().prop_map(PixelSrgb::from)
}

fn image() -> impl Strategy<Value = ImageBuffer> {
    (1u32..9, 1u32..9).prop_flat_map(|(w, h)| {
        proptest::collection::vec(pixel(), (w * h) as usize)
            .prop_map(move |px| ImageBuffer::new(w, h, px).unwrap())
    })
}

fn kind() -> impl Strategy<Value = Deficiency> {
    proptest::sample::select(Deficiency::ALL.to_vec())
}

fn lab() -> impl Strategy<Value = LabTriple> {
    (0.0..100.0f64, -128.0..128.0f64, -128.0..128.0f64)
        .prop_map(|(l, a, b)| LabTriple::new(l, a, b))
}

fn within(a: PixelSrgb, b: PixelSrgb, tol: i32) -> bool {
    a.channels()
        .iter()
        .zip(b.channels())
        .all(|(&x, y)| (x as i32 - y as i32).abs() <= tol)
}

proptest! {
    #[test]
    fn lms_round_trip(r in -0.2..1.2f64, g in -0.2..1.2f64, b in -0.2..1.2f64) {
        let c = LinearRgb::new(r, g, b);
        let back = lms_to_rgb(rgb_to_lms(c));
        for (x, y) in back.to_array().into_iter().zip(c.to_array()) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn hsv_round_trip(p in pixel()) {
        let back = hsv_to_rgb(rgb_to_hsv(p));
        prop_assert!(within(back, p, 1), "{:?} -> {:?}", p, back);
    }

    #[test]
    fn hsv_wraps_and_clamps(h in -1000.0..1000.0f64, s in -2.0..3.0f64, v in -2.0..3.0f64) {
        let t = HsvTriple::new(h, s, v);
        prop_assert!((0.0..360.0).contains(&t.h));
        prop_assert!((0.0..=1.0).contains(&t.s));
        prop_assert!((0.0..=1.0).contains(&t.v));
    }

    #[test]
    fn neutral_has_no_chroma(v in any::<u8>()) {
        let p = PixelSrgb::gray(v);
        prop_assert_eq!(rgb_to_hsv(p).s, 0.0);
        let l = rgb_to_lab(p);
        prop_assert!(l.a_star.abs() < 0.5 && l.b_star.abs() < 0.5);
    }

    #[test]
    fn delta_e_is_a_metric(a in lab(), b in lab(), c in lab()) {
        prop_assert!(delta_e(a, b) >= 0.0);
        prop_assert_eq!(delta_e(a, b), delta_e(b, a));
        prop_assert_eq!(delta_e(a, a), 0.0);
        prop_assert!(delta_e(a, c) <= delta_e(a, b) + delta_e(b, c) + 1e-9);
    }

    #[test]
    fn channel_round_trip(c in any::<u8>()) {
        prop_assert_eq!(encode_channel(decode_channel(c)), c);
    }

    #[test]
    fn simulate_image_is_pixelwise(img in image(), k in kind(), s in 0.0..=1.0f64) {
        let prof = DeficiencyProfile::new(k, s).unwrap();
        let out = simulate_image(&img, &prof);
        prop_assert_eq!(out.dimensions(), img.dimensions());
        for (o, &p) in out.pixels().iter().zip(img.pixels()) {
            prop_assert_eq!(*o, simulate_pixel(p, &prof));
        }
    }

    #[test]
    fn severity_monotone(p in pixel(), k in proptest::sample::select(vec![
        Deficiency::Protanomaly, Deficiency::Deuteranomaly, Deficiency::Tritanomaly,
    ])) {
        let mut prev = 0.0;
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let d = confusion_distance(p, &DeficiencyProfile::new(k, s).unwrap());
            prop_assert!(d >= prev - 0.1, "{} at {}: {} after {}", k, s, d, prev);
            prev = d;
        }
    }

    #[test]
    fn gray_operators_idempotent(img in image()) {
        let once = red_channel_grayscale(&img);
        prop_assert_eq!(&red_channel_grayscale(&once), &once);
        let once = desaturate_helper(&img);
        prop_assert_eq!(&desaturate_helper(&once), &once);
        prop_assert!(once.pixels().iter().all(|&p| rgb_to_hsv(p).s == 0.0));
    }

    #[test]
    fn passive_filter_full_pass_is_identity(img in image()) {
        let out = passive_filter(&img, 1.0).unwrap();
        for (&o, &p) in out.pixels().iter().zip(img.pixels()) {
            prop_assert!(within(o, p, 1));
        }
    }

    #[test]
    fn mask_monotone_in_tau(img in image(), k in kind(), t1 in 0.01..60.0f64, dt in 0.0..60.0f64) {
        let prof = DeficiencyProfile::full(k);
        let loose = confusion_mask(&img, &prof, t1).unwrap();
        let tight = confusion_mask(&img, &prof, t1 + dt).unwrap();
        prop_assert!(tight.is_subset_of(&loose));
    }

    #[test]
    fn blink_off_phase_is_identity(img in image(), period in 1u64..5000, cycle in 0u64..20, seed in any::<u64>()) {
        let (w, h) = img.dimensions();
        let bits = (0..w * h).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let mask = RegionMask::new(w, h, bits).unwrap();
        // second half of a period
        let t = cycle * period + period.div_ceil(2);
        let state = BlinkState::new(period, t).unwrap();
        prop_assume!(!state.is_on());
        prop_assert_eq!(blink_overlay(&img, &mask, state, PixelSrgb::new(0, 0, 255)).unwrap(), img);
    }

    #[test]
    fn fuse_is_convex(img in image(), mix in 0.0..=1.0f64, level in any::<u8>(), tint in pixel()) {
        let (w, h) = img.dimensions();
        let band = BandImage::new(ConeClass::Uv, w, h, vec![level; (w * h) as usize]).unwrap();
        let cfg = AugmentConfig { mix, uv_display_color: tint, ..Default::default() };
        let out = fuse_band(&img, &band, &cfg).unwrap();
        for (&o, &p) in out.pixels().iter().zip(img.pixels()) {
            for ((o, p), t) in o.channels().into_iter().zip(p.channels()).zip(tint.channels()) {
                prop_assert!(o as i32 >= p.min(t) as i32 - 1 && o as i32 <= p.max(t) as i32 + 1);
            }
        }
        let no_ir = AugmentConfig { ir_enabled: false, ..cfg };
        let ir = BandImage::new(ConeClass::Ir, w, h, vec![255; (w * h) as usize]).unwrap();
        prop_assert_eq!(fuse_pentachromatic(&img, &band, &ir, &no_ir).unwrap(), fuse_band(&img, &band, &no_ir).unwrap());
    }

    #[test]
    fn single_step_recipe_matches_operator(img in image(), k in kind(), which in 0usize..6, t in 0u64..3000) {
        let text = ["red_gray", "desaturate", "luminance_equalize:gain=1.7", "passive_filter:attenuation=0.35",
            "blink:period_ms=700:tau=12", "edge_enhance:threshold=5"][which];
        let recipe = CorrectionRecipe::parse_text(text).unwrap();
        let prof = DeficiencyProfile::full(k);
        let op: Operator = text.parse().unwrap();
        let direct = op.apply(&img, Some(&prof), t).unwrap();
        let via = apply_recipe(&img, &recipe, Some(&prof), t).unwrap();
        prop_assert_eq!(via.dimensions(), img.dimensions());
        prop_assert_eq!(via, direct);
    }

    #[test]
    fn isoluminant_desaturation_never_helps(c1 in pixel(), c2 in pixel()) {
        let y = |p: PixelSrgb| srgb_decode(p).luminance();
        prop_assume!(y(c2) > 1e-4);
        let k = y(c1) / y(c2);
        let lin = srgb_decode(c2).to_array().map(|v| v * k);
        prop_assume!(lin.iter().all(|&v| v <= 1.0));
        let c2 = PixelSrgb::new(encode_channel(lin[0]), encode_channel(lin[1]), encode_channel(lin[2]));
        let before = delta_e(rgb_to_lab(c1), rgb_to_lab(c2));
        let gray = |p: PixelSrgb| PixelSrgb::gray(*p.channels().iter().max().unwrap());
        let after = delta_e(rgb_to_lab(gray(c1)), rgb_to_lab(gray(c2)));
        prop_assert!(after <= before + 1e-9, "{:?} {:?}: {} > {}", c1, c2, after, before);
    }
}

#[test]
fn dichromat_idempotent_and_neutral_on_cube() {
    let levels: Vec<u8> = (0..32).map(|i| (i * 255 / 31) as u8).collect();
    for kind in [
        Deficiency::Protanopia,
        Deficiency::Deuteranopia,
        Deficiency::Tritanopia,
    ] {
        let prof = DeficiencyProfile::full(kind);
        for &r in &levels {
            for &g in &levels {
                for &b in &levels {
                    let once = simulate_pixel(PixelSrgb::new(r, g, b), &prof);
                    assert!(
                        within(simulate_pixel(once, &prof), once, 1),
                        "{kind} {r},{g},{b}"
                    );
                }
            }
        }
    }
    for kind in Deficiency::ALL {
        let prof = DeficiencyProfile::full(kind);
        for v in 0..=255u8 {
            assert!(
                within(
                    simulate_pixel(PixelSrgb::gray(v), &prof),
                    PixelSrgb::gray(v),
                    2
                ),
                "{kind} {v}"
            );
        }
    }
}

#[test]
fn anomalous_full_severity_is_dichromat() {
    for kind in [
        Deficiency::Protanomaly,
        Deficiency::Deuteranomaly,
        Deficiency::Tritanomaly,
    ] {
        let full = DeficiencyProfile::full(kind);
        let di = DeficiencyProfile::full(kind.dichromat().unwrap());
        for i in 0..4096u32 {
            let p = PixelSrgb::new(
                (i * 37 % 256) as u8,
                (i * 91 % 256) as u8,
                (i * 13 % 256) as u8,
            );
            assert!(within(simulate_pixel(p, &full), simulate_pixel(p, &di), 1));
        }
    }
}
