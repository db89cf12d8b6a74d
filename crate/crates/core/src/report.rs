//! Length-table reproduction.
//!
//! Rows derive from the analytic scheme profiles only: `k` is the end
//! entity's public-key length, `s1` the certificate authority's signature
//! length, `s2` the end entity's signature length, with c = 34 and u = 68
//! constants. C and U are always recomputed from the length equations,
//! never stored.

use crate::cert::{cert_length, CertKind, LengthProfile};
use crate::crypto::{SchemeId, SchemeProfile};
use crate::spdu::{check_wsm_limit, spdu_length};

/// One row of the certificate/SPDU length comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportRow {
    pub security_level: u8,
    pub mode: CertKind,
    pub ca_scheme: SchemeId,
    pub ee_scheme: SchemeId,
    pub k: u32,
    pub s1: u32,
    pub c: u32,
    pub s2: u32,
    pub u: u32,
}

impl ReportRow {
    /// Builds a row from the default analytic profiles of a scheme pairing.
    pub fn from_profiles(mode: CertKind, ca_scheme: SchemeId, ee_scheme: SchemeId) -> ReportRow {
        let ca = SchemeProfile::default_for(ca_scheme);
        let ee = SchemeProfile::default_for(ee_scheme);
        ReportRow {
            security_level: ca.security_level,
            mode,
            ca_scheme,
            ee_scheme,
            k: ee.pk_len,
            s1: ca.sig_len,
            c: LengthProfile::DEFAULT_C,
            s2: ee.sig_len,
            u: LengthProfile::DEFAULT_U,
        }
    }

    pub fn length_profile(&self) -> LengthProfile {
        LengthProfile {
            c: self.c,
            u: self.u,
            k: self.k,
            s1: self.s1,
            s2: self.s2,
        }
    }

    /// C = c + k + s1.
    pub fn cert_total(&self) -> u64 {
        cert_length(&self.length_profile())
    }

    /// U = u + C + s2.
    pub fn spdu_total(&self) -> u64 {
        spdu_length(&self.length_profile())
    }

    pub fn fits_wsm(&self) -> bool {
        check_wsm_limit(self.spdu_total())
    }
}

/// The seven rows of the published length comparison, in table order.
pub fn table1_rows() -> Vec<ReportRow> {
    use CertKind::*;
    use SchemeId::*;
    vec![
        ReportRow::from_profiles(PureEcc, EcdsaP256, EcdsaP256),
        ReportRow::from_profiles(PurePqc, Dilithium2, Dilithium2),
        ReportRow::from_profiles(PurePqc, Falcon512, Falcon512),
        ReportRow::from_profiles(PurePqc, SphincsSha2_128f, SphincsSha2_128f),
        ReportRow::from_profiles(Hybrid, Dilithium2, EcdsaP256),
        ReportRow::from_profiles(Hybrid, Falcon512, EcdsaP256),
        ReportRow::from_profiles(Hybrid, SphincsSha2_128f, EcdsaP256),
    ]
}

/// Output formats for the CLI reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

pub fn render_lengths(rows: &[ReportRow], format: ReportFormat) -> String {
    let header = [
        "security_level",
        "mode",
        "ca_scheme",
        "ee_scheme",
        "k",
        "s1",
        "c",
        "C",
        "s2",
        "u",
        "U",
        "fits_wsm",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.security_level.to_string(),
                r.mode.label().to_string(),
                r.ca_scheme.display_name().to_string(),
                r.ee_scheme.display_name().to_string(),
                r.k.to_string(),
                r.s1.to_string(),
                r.c.to_string(),
                r.cert_total().to_string(),
                r.s2.to_string(),
                r.u.to_string(),
                r.spdu_total().to_string(),
                r.fits_wsm().to_string(),
            ]
        })
        .collect();
    render_table(&header, &cells, format)
}

pub(crate) fn render_table(
    header: &[&str],
    rows: &[Vec<String>],
    format: ReportFormat,
) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        ReportFormat::Markdown => {
            out.push_str("| ");
            out.push_str(&header.join(" | "));
            out.push_str(" |\n|");
            for _ in header {
                out.push_str(" --- |");
            }
            out.push('\n');
            for row in rows {
                out.push_str("| ");
                out.push_str(&row.join(" | "));
                out.push_str(" |\n");
            }
        }
    }
    out
}
