//! Scripts that reproduce a computation in Macaulay2 or Singular.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::monomial::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportTarget {
    M2,
    Singular,
}

impl FromStr for ExportTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "m2" | "macaulay2" => Ok(ExportTarget::M2),
            "singular" => Ok(ExportTarget::Singular),
            other => Err(format!(
                "unknown export target `{other}` (expected m2 or singular)"
            )),
        }
    }
}

/// A script that builds the ring with degree-lex order, defines the ideal
/// from `generators` and prints its Betti table, initial ideal and Hilbert
/// polynomial data.
pub fn export_ideal(
    target: ExportTarget,
    ring: Ring,
    characteristic: u64,
    generators: &[String],
) -> String {
    let vars: Vec<String> = (0..ring.nvars()).map(|k| ring.var_name(k)).collect();
    let gens = if generators.is_empty() {
        "0".to_string()
    } else {
        generators.join(", ")
    };
    let mut out = String::new();
    match target {
        ExportTarget::M2 => {
            let field = if characteristic == 0 {
                "QQ".to_string()
            } else {
                format!("ZZ/{characteristic}")
            };
            let _ = writeln!(
                out,
                "R = {field}[{}, MonomialOrder => GLex];",
                vars.join(", ")
            );
            let _ = writeln!(out, "I = ideal({gens});");
            let _ = writeln!(out, "print betti res I;");
            let _ = writeln!(out, "print leadTerm gens gb I;");
            let _ = writeln!(out, "print apply(11, d -> hilbertFunction(d, R/I));");
        }
        ExportTarget::Singular => {
            let _ = writeln!(out, "ring r = {characteristic}, ({}), Dp;", vars.join(", "));
            let _ = writeln!(out, "ideal I = {gens};");
            let _ = writeln!(out, "print(betti(mres(I, 0)), \"betti\");");
            let _ = writeln!(out, "ideal G = std(I);");
            let _ = writeln!(out, "print(lead(G));");
            let _ = writeln!(out, "hilb(G);");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn macaulay2_script() {
        let s = export_ideal(
            ExportTarget::M2,
            Ring::new(2, 1),
            0,
            &["x1^2 - u1^2".into(), "x1*x2".into()],
        );
        assert!(s.starts_with("R = QQ[x1, x2, u1, MonomialOrder => GLex];\n"));
        assert!(s.contains("I = ideal(x1^2 - u1^2, x1*x2);"));
    }

    #[test]
    fn singular_script() {
        let s = export_ideal(
            ExportTarget::Singular,
            Ring::new(3, 0),
            32003,
            &["x1*x2".into()],
        );
        assert!(s.starts_with("ring r = 32003, (x1, x2, x3), Dp;\n"));
        assert!(s.contains("ideal I = x1*x2;"));
    }

    #[test]
    fn target_names() {
        assert_eq!("m2".parse::<ExportTarget>(), Ok(ExportTarget::M2));
        assert_eq!(
            "Singular".parse::<ExportTarget>(),
            Ok(ExportTarget::Singular)
        );
        assert!("maple".parse::<ExportTarget>().is_err());
    }
}
