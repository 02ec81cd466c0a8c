//! Bit-stable report serialization.
//!
//! Fixed field order, decimal floats with 17 significant digits (lossless
//! round-trip), LF line endings. The JSON emitters are deliberately
//! hand-rolled so the byte layout is under our control; parsers on the other
//! side can use any JSON library.

use std::fmt::Write as _;

use crate::certify::{CertStatus, Certificate, TheoremReport};
use crate::curvature::ScanResult;
use crate::error::{Error, Result};
use crate::geodesics::PathSample;
use crate::gh::{DistortionReport, ProbeResult, TangentReport};

/// 17 significant decimal digits; round-trips any finite f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn certificate_json(c: &Certificate) -> String {
    let witness = match &c.status {
        CertStatus::Refuted(w) => format!(
            "{{\"r\":{},\"value\":{},\"bound\":{}}}",
            fmt_f64(w.r),
            fmt_f64(w.value),
            fmt_f64(w.bound)
        ),
        _ => "null".to_string(),
    };
    format!(
        "{{\"claim\":{},\"lambda\":{},\"m\":{},\"n\":{},\"status\":{},\"witness\":{},\"min_lo\":{},\"min_hi\":{},\"boxes\":{},\"depth\":{},\"wall_ms\":{}}}",
        json_str(c.claim.token()),
        fmt_f64(c.lambda),
        c.m,
        c.n,
        json_str(c.status.label()),
        witness,
        fmt_f64(c.min_enclosure.lo),
        fmt_f64(c.min_enclosure.hi),
        c.boxes,
        c.depth,
        c.wall_ms
    )
}

pub fn certificates_json(certs: &[Certificate]) -> String {
    let rows: Vec<String> = certs.iter().map(certificate_json).collect();
    format!("[{}]", rows.join(","))
}

pub fn theorem_json(rep: &TheoremReport) -> String {
    format!(
        "{{\"all_verified\":{},\"certificates\":{}}}",
        rep.all_verified,
        certificates_json(&rep.certificates)
    )
}

pub const REGISTRY_CSV_HEADER: &str =
    "claim,lambda,m,n,status,witness_r,witness_value,witness_bound,min_lo,min_hi,boxes,depth";

pub fn registry_csv(certs: &[Certificate]) -> String {
    let mut out = String::new();
    out.push_str(REGISTRY_CSV_HEADER);
    out.push('\n');
    for c in certs {
        let (wr, wv, wb) = match &c.status {
            CertStatus::Refuted(w) => (fmt_f64(w.r), fmt_f64(w.value), fmt_f64(w.bound)),
            _ => (String::new(), String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.claim.token(),
            fmt_f64(c.lambda),
            c.m,
            c.n,
            c.status.label(),
            wr,
            wv,
            wb,
            fmt_f64(c.min_enclosure.lo),
            fmt_f64(c.min_enclosure.hi),
            c.boxes,
            c.depth
        );
    }
    out
}

pub const SWEEP_CSV_HEADER: &str =
    "lambda,epsilon,net_size_A,net_size_B,distortion,gh_upper,gh_lower";

pub fn sweep_csv(reports: &[DistortionReport]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.lambda),
            fmt_f64(r.epsilon),
            r.net_size_a,
            r.net_size_b,
            fmt_f64(r.distortion),
            fmt_f64(r.gh_upper),
            fmt_f64(r.gh_lower)
        );
    }
    out
}

pub fn sweep_json(reports: &[DistortionReport]) -> String {
    let rows: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{{\"lambda\":{},\"epsilon\":{},\"net_size_A\":{},\"net_size_B\":{},\"distortion\":{},\"gh_upper\":{},\"gh_lower\":{},\"argmax_pair\":[{},{}]}}",
                fmt_f64(r.lambda),
                fmt_f64(r.epsilon),
                r.net_size_a,
                r.net_size_b,
                fmt_f64(r.distortion),
                fmt_f64(r.gh_upper),
                fmt_f64(r.gh_lower),
                r.argmax_pair.0,
                r.argmax_pair.1
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

pub const PROBE_CSV_HEADER: &str = "epsilon,covering_number";

pub fn probe_csv(res: &ProbeResult) -> String {
    let mut out = String::new();
    out.push_str(PROBE_CSV_HEADER);
    out.push('\n');
    for &(eps, n) in &res.counts {
        let _ = writeln!(out, "{},{}", fmt_f64(eps), n);
    }
    out
}

pub fn probe_json(res: &ProbeResult) -> String {
    let counts: Vec<String> = res
        .counts
        .iter()
        .map(|&(e, n)| format!("{{\"epsilon\":{},\"covering_number\":{}}}", fmt_f64(e), n))
        .collect();
    format!(
        "{{\"slope\":{},\"intercept\":{},\"residual\":{},\"reliable\":{},\"counts\":[{}]}}",
        fmt_f64(res.slope),
        fmt_f64(res.intercept),
        fmt_f64(res.residual),
        res.reliable,
        counts.join(",")
    )
}

pub const TANGENT_CSV_HEADER: &str = "scale,max_rel_err";

pub fn tangent_csv(rows: &[TangentReport]) -> String {
    let mut out = String::new();
    out.push_str(TANGENT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{}", fmt_f64(r.scale), fmt_f64(r.max_rel_err));
    }
    out
}

pub fn tangent_json(rows: &[TangentReport]) -> String {
    let items: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{{\"scale\":{},\"max_rel_err\":{},\"max_rel_err_isotropic\":{}}}",
                fmt_f64(r.scale),
                fmt_f64(r.max_rel_err),
                fmt_f64(r.max_rel_err_isotropic)
            )
        })
        .collect();
    format!("[{}]", items.join(","))
}

pub const PATH_CSV_HEADER: &str = "s,r,alpha,beta";

pub fn path_csv(samples: &[PathSample]) -> String {
    let mut out = String::new();
    out.push_str(PATH_CSV_HEADER);
    out.push('\n');
    for p in samples {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(p.s),
            fmt_f64(p.rho),
            fmt_f64(p.ang[0]),
            fmt_f64(p.ang[1])
        );
    }
    out
}

pub fn scan_json(s: &ScanResult, lambda: f64, m: u32, n: u32) -> String {
    format!(
        "{{\"lambda\":{},\"m\":{},\"n\":{},\"min\":{},\"argmin_r\":{},\"component\":{}}}",
        fmt_f64(lambda),
        m,
        n,
        fmt_f64(s.min),
        fmt_f64(s.argmin_r),
        json_str(&s.component.to_string())
    )
}

/// Write a report to a file (LF endings are already in `content`).
pub fn write_file(path: &str, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.to_string(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_17_digits_and_roundtrips() {
        for &x in &[0.75, -1.25, std::f64::consts::PI, 1e-300, 123456789.123456789] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "roundtrip failed for {s}");
        }
        assert_eq!(fmt_f64(0.75), "7.5000000000000000e-1");
    }

    #[test]
    fn json_escapes_strings() {
        assert_eq!(json_str("a\"b"), "\"a\\\"b\"");
        assert_eq!(json_str("x\ny"), "\"x\\ny\"");
    }

    #[test]
    fn serialization_is_deterministic() {
        use crate::certify::{certify_claim, BnbOptions, ClaimId};
        use crate::params::WarpParams;
        let p = WarpParams::new(1.0, 8, 2).unwrap();
        let mut a = certify_claim(ClaimId::C3, &p, &BnbOptions::default());
        let mut b = certify_claim(ClaimId::C3, &p, &BnbOptions::default());
        a.wall_ms = 0;
        b.wall_ms = 0;
        assert_eq!(certificate_json(&a), certificate_json(&b));
    }
}
