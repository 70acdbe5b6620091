//! The example catalog shown by `verify list`.

use crgeom::constructions::KahlerKind;
use serde::Serialize;

use crate::checks::Suite;
use crate::config::SUPPORTED_M;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub base: &'static str,
    pub m: Vec<usize>,
    /// `scal^h` for each entry of `m`.
    pub scal_h: Vec<f64>,
    pub sign: &'static str,
    /// Kähler potential on the base chart; all other data is derived from it.
    pub inputs: &'static str,
    pub suites: Vec<&'static str>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    KahlerKind::CATALOG
        .into_iter()
        .map(|k| {
            let scal_h: Vec<f64> = SUPPORTED_M.iter().map(|&m| k.scalar_curvature(m, 1.0)).collect();
            CatalogEntry {
                id: k.id(),
                base: match k {
                    KahlerKind::Flat => "C^m, Euclidean",
                    KahlerKind::FubiniStudy => "affine chart of CP^m, Fubini–Study",
                    KahlerKind::ComplexHyperbolic => "unit ball, complex hyperbolic",
                    KahlerKind::SphereTimesFlat => "CP^1 × C",
                },
                m: SUPPORTED_M.to_vec(),
                sign: match scal_h[0].partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Greater) => "positive",
                    Some(std::cmp::Ordering::Less) => "negative",
                    _ => "zero",
                },
                inputs: match k {
                    KahlerKind::Flat => "Φ = ½ r²",
                    KahlerKind::FubiniStudy => "Φ = 2 ln(1 + r²)",
                    KahlerKind::ComplexHyperbolic => "Φ = −2 ln(1 − r²)",
                    KahlerKind::SphereTimesFlat => "Φ = 2 ln(1 + |z₁|²) + ½ |z₂|²",
                },
                scal_h,
                suites: Suite::ALL.iter().map(|s| s.id()).collect(),
            }
        })
        .collect()
}

/// Plain-text table.
pub fn table() -> String {
    let mut out = format!("{:<20} {:<36} {:<6} {:<14} {:<10} {}\n", "id", "base", "m", "scal_h", "sign", "inputs");
    for e in catalog() {
        let m: Vec<String> = e.m.iter().map(|m| m.to_string()).collect();
        let s: Vec<String> = e.scal_h.iter().map(|s| format!("{s}")).collect();
        out.push_str(&format!(
            "{:<20} {:<36} {:<6} {:<14} {:<10} {}\n",
            e.id,
            e.base,
            m.join(","),
            s.join(","),
            e.sign,
            e.inputs
        ));
    }
    out.push_str("\nrequired inputs: example id and m; the chart, J, h and γ follow from the potential\n");
    out.push_str(&format!("suites: {}\n", Suite::ALL.map(|s| s.id()).join(", ")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_signs() {
        let c = catalog();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].sign, "zero");
        assert_eq!(c[1].scal_h, vec![2.0, 6.0]);
        assert_eq!(c[2].sign, "negative");
        assert!(table().contains("fubini_study"));
        assert!(c.iter().all(|e| e.inputs.starts_with("Φ")));
    }
}
