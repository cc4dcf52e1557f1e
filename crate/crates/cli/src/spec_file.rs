//! Line-oriented `key: value` ODE spec files.
//!
//! Reserved keys: `name`, `indep`, `dep`, `equation`. Anything else is
//! free-form metadata. Lines starting with `#` and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use painleve_forge::{parse_expr_named, JetPoly, ParsedExpr};

/// Maximum differential order accepted in a spec file.
pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone)]
pub struct OdeSpecFile {
    pub name: String,
    pub indep: String,
    pub dep: String,
    pub equation_text: String,
    pub metadata: BTreeMap<String, String>,
}

impl OdeSpecFile {
    pub fn load(path: &Path) -> Result<OdeSpecFile> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<OdeSpecFile> {
        let mut fields: BTreeMap<String, String> = BTreeMap::new();
        let mut metadata = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| anyhow!("line {}: expected 'key: value'", idx + 1))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            match key.as_str() {
                "name" | "indep" | "dep" | "equation" => {
                    if fields.insert(key.clone(), value).is_some() {
                        bail!("line {}: duplicate '{key}' entry", idx + 1);
                    }
                }
                _ => {
                    metadata.insert(key, value);
                }
            }
        }
        let spec = OdeSpecFile {
            name: fields
                .get("name")
                .cloned()
                .ok_or_else(|| anyhow!("missing 'name' entry"))?,
            indep: fields.get("indep").cloned().unwrap_or_else(|| "x".into()),
            dep: fields
                .get("dep")
                .cloned()
                .ok_or_else(|| anyhow!("missing 'dep' entry"))?,
            equation_text: fields
                .get("equation")
                .cloned()
                .ok_or_else(|| anyhow!("missing 'equation' entry"))?,
            metadata,
        };
        if spec.indep == spec.dep {
            bail!("independent and dependent variables must differ (both '{}')", spec.indep);
        }
        spec.equation()?; // validate grammar and order on load
        Ok(spec)
    }

    /// The parsed equation (possibly rational).
    pub fn parsed(&self) -> Result<ParsedExpr> {
        let e = parse_expr_named(&self.equation_text, &self.indep, &self.dep)
            .map_err(|e| anyhow!("equation does not parse: {e}"))?;
        Ok(e)
    }

    /// The equation as a polynomial, clearing any denominator.
    pub fn equation(&self) -> Result<JetPoly> {
        let delta = match self.parsed()? {
            ParsedExpr::Poly(p) => p,
            ParsedExpr::Rational(r) => {
                let (num, _den) = painleve_forge::clear_denominators(&r);
                num
            }
        };
        if delta.is_zero() {
            bail!("equation is identically zero");
        }
        let order = delta.max_jet_order().unwrap_or(0);
        if order > MAX_ORDER {
            bail!("equation order {order} exceeds the supported maximum {MAX_ORDER}");
        }
        Ok(delta)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string())
            .with_context(|| format!("writing {}", path.display()))
    }
}

impl fmt::Display for OdeSpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "indep: {}", self.indep)?;
        writeln!(f, "dep: {}", self.dep)?;
        writeln!(f, "equation: {}", self.equation_text)?;
        for (k, v) in &self.metadata {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}
