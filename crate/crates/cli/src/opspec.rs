//! Parsing of `--op kind:params` operator strings.

use anyhow::{anyhow, bail, Context, Result};
use bej_core::moments::classify;
use bej_core::tables::Registry;
use bej_core::{Bej1Spec, Bej2Spec, BejSpec, ExtendedIndex, ExtendedRate, OperatorDescriptor, Param};

pub const OP_SYNTAX: &str = "bernstein:N | beta:r,a,b | bej1:m,n,r,a,b | bej2:n,s,c,d,r,a,b | row:KEY[:p1,p2,...]";

#[derive(Debug, Clone)]
pub struct ParsedOp {
    pub descriptor: OperatorDescriptor,
    /// The BEJ family member, when the operator is one.
    pub spec: Option<BejSpec>,
    pub warnings: Vec<String>,
}

fn is_inf(s: &str) -> bool {
    matches!(s, "inf" | "infinity" | "∞")
}

fn index(s: &str) -> Result<ExtendedIndex> {
    if is_inf(s) {
        return Ok(ExtendedIndex::Infinity);
    }
    let n: u32 = s.parse().with_context(|| format!("index `{s}` is not a positive integer or inf"))?;
    Ok(ExtendedIndex::finite(n)?)
}

fn param(s: &str) -> Result<Param> {
    Ok(s.parse::<Param>()?)
}

fn rate(s: &str) -> Result<ExtendedRate> {
    if is_inf(s) {
        Ok(ExtendedRate::Infinity)
    } else {
        Ok(ExtendedRate::Finite(param(s)?))
    }
}

fn fields<'a>(kind: &str, rest: &'a str, names: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = rest.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.len() != names.len() {
        bail!("`{kind}` takes {} parameter(s) ({}), got {}", names.len(), names.join(","), parts.len());
    }
    Ok(parts)
}

pub fn parse_op(text: &str) -> Result<ParsedOp> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let from_spec = |spec: BejSpec| -> Result<ParsedOp> {
        let warnings = match &spec {
            BejSpec::TypeI(s) => s.warnings(),
            BejSpec::TypeII(s) => s.warnings(),
        };
        Ok(ParsedOp { descriptor: spec.descriptor()?, spec: Some(spec), warnings })
    };
    match kind.trim() {
        "bernstein" => {
            let p = fields(kind, rest, &["n"])?;
            let n: u32 = p[0].parse().with_context(|| format!("degree `{}` is not a positive integer", p[0]))?;
            let descriptor = OperatorDescriptor::bernstein(n)?;
            let spec = classify(&descriptor);
            Ok(ParsedOp { descriptor, spec, warnings: Vec::new() })
        }
        "beta" => {
            let p = fields(kind, rest, &["r", "a", "b"])?;
            let descriptor = OperatorDescriptor::beta(param(p[0])?, param(p[1])?, param(p[2])?)?;
            let spec = classify(&descriptor);
            Ok(ParsedOp { descriptor, spec, warnings: Vec::new() })
        }
        "bej1" => {
            let p = fields(kind, rest, &["m", "n", "r", "a", "b"])?;
            from_spec(BejSpec::TypeI(Bej1Spec::new(index(p[0])?, index(p[1])?, rate(p[2])?, param(p[3])?, param(p[4])?)?))
        }
        "bej2" => {
            let p = fields(kind, rest, &["n", "s", "c", "d", "r", "a", "b"])?;
            from_spec(BejSpec::TypeII(Bej2Spec::new(
                index(p[0])?,
                rate(p[1])?,
                param(p[2])?,
                param(p[3])?,
                rate(p[4])?,
                param(p[5])?,
                param(p[6])?,
            )?))
        }
        "row" => {
            let (key, params) = rest.split_once(':').unwrap_or((rest, ""));
            let row = Registry::builtin().row(key.trim())?;
            let values = if params.trim().is_empty() {
                row.default_params().to_vec()
            } else {
                params.split(',').map(|p| param(p.trim())).collect::<Result<Vec<_>>>()?
            };
            from_spec(row.spec(&values)?)
        }
        other => Err(anyhow!("unknown operator kind `{other}`; expected {OP_SYNTAX}")),
    }
}
