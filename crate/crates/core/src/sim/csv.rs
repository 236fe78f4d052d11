//! CSV output and a matplotlib script for BER curves.

use super::{BerPoint, SimError};
use crate::decoder::DecoderVariant;

pub const CSV_HEADER: &str = "variant,ebn0_db,frames,bits_counted,bit_errors,frame_errors,ber,fer,mean_iterations,low_confidence";

/// Formats like C's `%.6g`.
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn emit_csv(points: &[BerPoint]) -> String {
    let mut out = String::with_capacity(64 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.variant,
            format_g6(p.ebn0_db),
            p.frames,
            p.bits_counted,
            p.bit_errors,
            p.frame_errors,
            format_g6(p.ber),
            format_g6(p.fer),
            format_g6(p.mean_iterations),
            p.low_confidence
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<BerPoint>, SimError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(SimError::Invalid("CSV header does not match".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |what: &str| SimError::Invalid(format!("CSV line {}: {what}", i + 2));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(bad("expected 10 fields"));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|_| bad("bad integer"));
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        out.push(BerPoint {
            variant: f[0].parse::<DecoderVariant>().map_err(|_| bad("bad variant"))?,
            ebn0_db: float(f[1])?,
            frames: int(f[2])?,
            bits_counted: int(f[3])?,
            bit_errors: int(f[4])?,
            frame_errors: int(f[5])?,
            ber: float(f[6])?,
            fer: float(f[7])?,
            mean_iterations: float(f[8])?,
            low_confidence: f[9].parse::<bool>().map_err(|_| bad("bad flag"))?,
        });
    }
    Ok(out)
}

/// A self-contained Python script plotting BER against Eb/N0 on a log scale,
/// one curve per variant.
pub fn emit_plot_script(points: &[BerPoint]) -> String {
    let mut variants: Vec<String> = Vec::new();
    for p in points {
        let v = p.variant.to_string();
        if !variants.contains(&v) {
            variants.push(v);
        }
    }
    let mut s = String::from(
        "#!/usr/bin/env python3\n\
         import matplotlib\n\
         matplotlib.use(\"Agg\")\n\
         import matplotlib.pyplot as plt\n\n\
         curves = {\n",
    );
    for v in &variants {
        let pts: Vec<String> = points
            .iter()
            .filter(|p| p.variant.to_string() == *v && p.ber > 0.0)
            .map(|p| format!("({}, {})", format_g6(p.ebn0_db), format_g6(p.ber)))
            .collect();
        s.push_str(&format!("    \"{v}\": [{}],\n", pts.join(", ")));
    }
    s.push_str(
        "}\n\n\
         fig, ax = plt.subplots()\n\
         for name, pts in curves.items():\n\
         \x20   if pts:\n\
         \x20       xs, ys = zip(*pts)\n\
         \x20       ax.semilogy(xs, ys, marker=\"o\", label=name)\n\
         ax.set_xlabel(\"Eb/N0 (dB)\")\n\
         ax.set_ylabel(\"BER\")\n\
         ax.grid(True, which=\"both\")\n\
         ax.legend()\n\
         fig.savefig(\"ber.png\", dpi=150)\n",
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (8.4, "8.4"),
            (0.5, "0.5"),
            (1e-5, "1e-05"),
            (0.000123456789, "0.000123457"),
            (123456789.0, "1.23457e+08"),
            (100000.0, "100000"),
            (999999.5, "1e+06"),
            (-2.5, "-2.5"),
            (12.0, "12"),
            (0.0001, "0.0001"),
            (3.0517578125e-05, "3.05176e-05"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g6(x), s, "{x}");
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(emit_csv(&[]), format!("{CSV_HEADER}\n"));
        assert!(parse_csv(&emit_csv(&[])).unwrap().is_empty());
        assert!(parse_csv("nope\n").is_err());
    }

    fn point(frames: u64, bit_errors: u64, frame_errors: u64, iters: u64, ebn0: f64) -> BerPoint {
        let bits_counted = frames * 7200;
        BerPoint {
            variant: DecoderVariant::SvsMinSum { step: 10 },
            ebn0_db: ebn0,
            frames,
            bits_counted,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / bits_counted as f64,
            fer: frame_errors as f64 / frames as f64,
            mean_iterations: iters as f64 / frames as f64,
            low_confidence: frame_errors < 100,
        }
    }

    proptest! {
        #[test]
        fn csv_reload_is_stable(frames in 1u64..1_000_000, errs in 0u64..10_000, iters in 1u64..50, ebn0 in -5.0f64..20.0) {
            let fe = errs.min(frames);
            let p = point(frames, errs, fe, iters * frames, ebn0);
            let text = emit_csv(std::slice::from_ref(&p));
            let back = parse_csv(&text).unwrap();
            prop_assert_eq!(back.len(), 1);
            let q = &back[0];
            prop_assert_eq!((q.variant, q.frames, q.bits_counted, q.bit_errors, q.frame_errors, q.low_confidence),
                (p.variant, p.frames, p.bits_counted, p.bit_errors, p.frame_errors, p.low_confidence));
            prop_assert!((q.ber - p.ber).abs() <= 5e-6 * p.ber);
            prop_assert_eq!(emit_csv(&back), text);
        }
    }

    #[test]
    fn plot_script_lists_each_variant() {
        let mut a = point(10, 5, 3, 100, 8.0);
        let b = point(10, 0, 0, 10, 9.0);
        a.variant = DecoderVariant::Spa;
        let s = emit_plot_script(&[a, b]);
        assert!(s.contains("\"spa\": [(8, 6.94444e-05)]"));
        assert!(s.contains("\"svs:S=10\": []"));
        assert!(s.contains("semilogy"));
    }
}
