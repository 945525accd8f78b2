//! Everything `lindim analyze` says about one system.

use std::fmt::Write;

use lindim::picard::WeylComponent;
use lindim::{
    cohomology_table, effectivity, enumerate_base_cycles, froberg_prediction,
    interpolation_dimension, is_cremona_reduced, n3_condition, reduce_cones, weyl_base_locus,
    BaseLocusReport, CohomologyTable, ConeReduction, ContainmentPolicy, DimensionReport,
    Effectivity, Error, LinearSystem, N3Condition, OracleConfig, OracleResult, PicardClass,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub system: LinearSystem,
    pub policy: ContainmentPolicy,
    pub dimensions: DimensionReport,
    pub effectivity: Effectivity,
    pub base_locus: BaseLocusReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyTable>,
    pub cremona_reduced: bool,
    pub n3: N3Condition,
    pub cones: ConeReduction,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub froberg: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<Vec<WeylComponent>>,
    /// Parts that were skipped and why.
    #[serde(default)]
    pub notices: Vec<String>,
}

mod opt_big {
    use lindim::system::bigint_json::{Owned, Wrap};
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, ser: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(Wrap).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<Owned>::deserialize(de)?.map(|o| o.0))
    }
}

/// Scope problems become notices; only oracle failures are errors.
pub fn analyze(
    sys: &LinearSystem,
    policy: ContainmentPolicy,
    oracle: Option<&OracleConfig>,
    weyl_depth: Option<usize>,
) -> Result<Analysis> {
    let mut notices = Vec::new();
    let oracle = match oracle {
        Some(cfg) => Some(interpolation_dimension(sys, cfg)?),
        None => None,
    };
    let dimensions = DimensionReport::new(sys, policy, oracle.as_ref().map(|o| o.dim));
    let cohomology = match cohomology_table(sys) {
        Ok(t) => Some(t),
        Err(e @ (Error::OutOfScope(_) | Error::EmptySystem { .. })) => {
            notices.push(format!("cohomology: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let froberg = match froberg_prediction(sys) {
        Ok(v) => Some(v),
        Err(e) => {
            notices.push(format!("froberg: {e}"));
            None
        }
    };
    let weyl = match weyl_depth {
        Some(depth) => match weyl_base_locus(&PicardClass::from_system(sys), depth, false) {
            Ok(w) => Some(w),
            Err(e) => {
                notices.push(format!("weyl: {e}"));
                None
            }
        },
        None => None,
    };
    Ok(Analysis {
        system: sys.clone(),
        policy,
        dimensions,
        effectivity: effectivity(sys),
        base_locus: enumerate_base_cycles(sys),
        cohomology,
        cremona_reduced: is_cremona_reduced(sys),
        n3: n3_condition(sys),
        cones: reduce_cones(sys),
        froberg,
        oracle,
        weyl,
        notices,
    })
}

pub fn class_string(c: &PicardClass) -> String {
    let m: Vec<String> = c.mults().iter().map(i64::to_string).collect();
    format!("({}; {})", c.degree(), m.join(","))
}

pub fn render_analysis(a: &Analysis) -> String {
    let mut out = String::new();
    let d = &a.dimensions;
    let row = |out: &mut String, k: &str, v: String| {
        let _ = writeln!(out, "{k:<16} {v}");
    };
    row(&mut out, "system", a.system.to_string());
    row(&mut out, "vdim", d.vdim.to_string());
    row(&mut out, "edim", d.edim.to_string());
    row(&mut out, "lvdim", d.lvdim.to_string());
    row(&mut out, "ldim", format!("{} ({})", d.ldim, a.policy));
    if let Some(o) = &a.oracle {
        row(
            &mut out,
            "dim",
            format!("{} (rank {} of {}x{})", o.dim, o.rank, o.rows, o.cols),
        );
    }
    let tag = if d.predicted { " (predicted)" } else { "" };
    row(
        &mut out,
        "classification",
        format!("{}{tag}", d.classification),
    );
    row(
        &mut out,
        "effectivity",
        format!("{:?}", a.effectivity).to_lowercase(),
    );
    row(&mut out, "cremona reduced", a.cremona_reduced.to_string());
    if a.n3.in_scope {
        row(
            &mut out,
            "n3 condition",
            format!("{} (b = {})", a.n3.satisfied, a.n3.b),
        );
    }
    match &a.cones {
        ConeReduction::System(s) if s != &a.system => {
            row(&mut out, "cone reduction", s.to_string())
        }
        ConeReduction::System(_) => {}
        ConeReduction::Hyperplane => row(&mut out, "cone reduction", "hyperplane".into()),
        ConeReduction::Empty => row(&mut out, "cone reduction", "empty".into()),
    }
    if let Some(f) = &a.froberg {
        row(&mut out, "froberg", f.to_string());
    }
    let _ = writeln!(out, "\nbase locus (rbar = {})", a.base_locus.rbar);
    if a.base_locus.cycles.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for c in &a.base_locus.cycles {
        let labels: Vec<String> = c.index_set.labels().iter().map(usize::to_string).collect();
        let exact = if c.exact { "" } else { " (lower bound)" };
        let _ = writeln!(
            out,
            "  r={}  I={{{}}}  k={}{exact}",
            c.r,
            labels.join(","),
            c.k
        );
    }
    if let Some(t) = &a.cohomology {
        let _ = writeln!(out, "\ncohomology (h0 = {}, h1 = {})", t.h0, t.h1());
        let _ = writeln!(
            out,
            "  {:>3}  {:>4}  {:>12}  {:>12}",
            "r", "i", "h^i", "chi"
        );
        for l in &t.levels {
            for (i, h) in &l.h {
                let chi = t.euler_characteristic(l.r);
                let _ = writeln!(out, "  {:>3}  {:>4}  {:>12}  {:>12}", l.r, i, h, chi);
            }
        }
        if let Some(r) = &t.hyperplane_residual {
            let _ = writeln!(out, "  hyperplane residual {}", class_string(r));
        }
    }
    if let Some(w) = &a.weyl {
        let _ = writeln!(out, "\nweyl base locus");
        if w.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for c in w {
            let _ = writeln!(
                out,
                "  {}  depth {}  mult {}",
                class_string(&c.class),
                c.depth,
                c.mult
            );
        }
    }
    for n in &a.notices {
        let _ = writeln!(out, "\nnote: {n}");
    }
    out
}
