//! The annex moment tables: a registry of named operators with their
//! printed formulas, and reconciliation of those formulas against the
//! exact oracle.
//!
//! Printed formulas are evaluated exactly as transcribed. Disagreements are
//! reported by [`Registry::reconcile`]; the known ones are listed in the
//! errata file together with a corrected formula that is itself re-checked.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_with_vars, Expr};
use crate::moments::moments_exact;
use crate::operator::{Bej1Spec, Bej2Spec, BejSpec, ExtendedIndex, ExtendedRate, OperatorDescriptor};
use crate::oracle::{central_moment_exact, t11_exact, RationalPolynomial};
use crate::scalar::{parse_rational, rational, rational_to_f64, Param};

const ROWS_TOML: &str = include_str!("../data/rows.toml");
const ERRATA_TOML: &str = include_str!("../data/errata.toml");
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamDomain {
    /// Integer `>= 1`.
    Index,
    /// Real `> 0`.
    Positive,
    /// Real `>= -1`.
    Jacobi,
}

impl ParamDomain {
    fn check(self, name: &str, p: &Param) -> Result<()> {
        let ok = match (self, p) {
            (ParamDomain::Index, Param::Exact(q)) => q.is_integer() && *q >= BigRational::from_integer(1.into()),
            (ParamDomain::Index, Param::Float(_)) => false,
            (ParamDomain::Positive, p) => p.to_f64() > 0.0 && p.to_f64().is_finite(),
            (ParamDomain::Jacobi, Param::Exact(q)) => *q >= BigRational::from_integer((-1).into()),
            (ParamDomain::Jacobi, Param::Float(v)) => *v >= -1.0 && v.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ParameterDomain(format!("{name}={p} is outside the {self:?} domain")))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub domain: ParamDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    SecondMoment,
    FirstMoment,
    T11,
}

impl Column {
    pub const ALL: [Column; 3] = [Column::SecondMoment, Column::FirstMoment, Column::T11];

    pub fn as_str(self) -> &'static str {
        match self {
            Column::SecondMoment => "second_moment",
            Column::FirstMoment => "first_moment",
            Column::T11 => "t11",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A formula as printed, with its parsed form.
#[derive(Debug, Clone)]
pub struct Formula {
    pub text: String,
    pub expr: Expr,
}

/// A mapping entry: a parameter expression or the infinite index/rate.
#[derive(Debug, Clone)]
pub enum MapValue {
    Infinity,
    Expr(Expr),
}

#[derive(Debug, Clone)]
pub enum Mapping {
    TypeI { m: MapValue, n: MapValue, r: MapValue, a: MapValue, b: MapValue },
    TypeII { n: MapValue, s: MapValue, c: MapValue, d: MapValue, r: MapValue, a: MapValue, b: MapValue },
}

/// One row of the annex tables.
#[derive(Debug, Clone)]
pub struct NamedOperatorRow {
    pub key: String,
    /// Table holding the second moment (1-5).
    pub table: u32,
    /// Table holding the first moment and T(e1,e1;x) columns (6 or 7).
    pub t11_table: Option<u32>,
    pub notation: String,
    pub name: String,
    pub params: Vec<ParamSpec>,
    /// Symbols used in printed formulas for a parameter of another name.
    pub aliases: BTreeMap<String, String>,
    pub mapping: Mapping,
    pub second_moment: Formula,
    pub first_moment: Option<Formula>,
    pub t11: Option<Formula>,
    /// Default parameter instantiations, in `params` order.
    pub instances: Vec<Vec<Param>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Erratum {
    pub key: String,
    pub column: Column,
    pub corrected: String,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableInfo {
    pub number: u32,
    pub title: String,
}

#[derive(Deserialize)]
struct RowsFile {
    version: u32,
    table: Vec<TableInfo>,
    row: Vec<RowRecord>,
}

#[derive(Deserialize)]
struct RowRecord {
    key: String,
    table: u32,
    t11_table: Option<u32>,
    notation: String,
    name: String,
    params: Vec<ParamSpec>,
    #[serde(default)]
    aliases: BTreeMap<String, String>,
    family: String,
    mapping: BTreeMap<String, String>,
    second_moment: String,
    first_moment: Option<String>,
    t11: Option<String>,
    instances: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct ErrataFile {
    version: u32,
    #[serde(default)]
    erratum: Vec<Erratum>,
}

impl NamedOperatorRow {
    fn from_record(rec: RowRecord) -> Result<Self> {
        let key = rec.key.clone();
        let err = |msg: String| Error::Registry(format!("row {key}: {msg}"));
        let param_names: Vec<&str> = rec.params.iter().map(|p| p.name.as_str()).collect();
        let mut formula_vars = vec!["x", "X"];
        formula_vars.extend(param_names.iter().copied());
        formula_vars.extend(rec.aliases.keys().map(String::as_str));
        for target in rec.aliases.values() {
            if !param_names.contains(&target.as_str()) {
                return Err(err(format!("alias target `{target}` is not a parameter")));
            }
        }
        let formula = |text: &str| -> Result<Formula> {
            let expr = parse_with_vars(text, &formula_vars).map_err(|e| err(format!("{e} in `{text}`")))?;
            Ok(Formula { text: text.to_string(), expr })
        };
        let map_value = |name: &str, default: Option<&str>| -> Result<MapValue> {
            let text = match (rec.mapping.get(name), default) {
                (Some(t), _) => t.as_str(),
                (None, Some(d)) => d,
                (None, None) => return Err(err(format!("mapping lacks `{name}`"))),
            };
            if text == "inf" {
                return Ok(MapValue::Infinity);
            }
            parse_with_vars(text, &param_names)
                .map(MapValue::Expr)
                .map_err(|e| err(format!("{e} in mapping `{name} = {text}`")))
        };
        let mapping = match rec.family.as_str() {
            "bej1" => Mapping::TypeI {
                m: map_value("m", None)?,
                n: map_value("n", None)?,
                r: map_value("r", None)?,
                a: map_value("a", Some("0"))?,
                b: map_value("b", Some("0"))?,
            },
            "bej2" => Mapping::TypeII {
                n: map_value("n", None)?,
                s: map_value("s", None)?,
                c: map_value("c", Some("0"))?,
                d: map_value("d", Some("0"))?,
                r: map_value("r", None)?,
                a: map_value("a", Some("0"))?,
                b: map_value("b", Some("0"))?,
            },
            other => return Err(err(format!("unknown family `{other}`"))),
        };
        let instances = rec
            .instances
            .iter()
            .map(|inst| {
                inst.iter()
                    .map(|s| parse_rational(s).map(Param::Exact).ok_or_else(|| err(format!("bad instance value `{s}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let row = NamedOperatorRow {
            key: rec.key.clone(),
            table: rec.table,
            t11_table: rec.t11_table,
            notation: rec.notation.clone(),
            name: rec.name.clone(),
            params: rec.params.clone(),
            aliases: rec.aliases.clone(),
            mapping,
            second_moment: formula(&rec.second_moment)?,
            first_moment: rec.first_moment.as_deref().map(&formula).transpose()?,
            t11: rec.t11.as_deref().map(&formula).transpose()?,
            instances,
        };
        for inst in &row.instances {
            row.check_params(inst).map_err(|e| err(e.to_string()))?;
        }
        if row.instances.len() < 3 {
            return Err(err("fewer than three default instantiations".into()));
        }
        Ok(row)
    }

    pub fn formula(&self, column: Column) -> Option<&Formula> {
        match column {
            Column::SecondMoment => Some(&self.second_moment),
            Column::FirstMoment => self.first_moment.as_ref(),
            Column::T11 => self.t11.as_ref(),
        }
    }

    pub fn columns(&self) -> Vec<Column> {
        Column::ALL.into_iter().filter(|c| self.formula(*c).is_some()).collect()
    }

    pub fn default_params(&self) -> &[Param] {
        &self.instances[0]
    }

    pub fn check_params(&self, values: &[Param]) -> Result<()> {
        if values.len() != self.params.len() {
            return Err(Error::ParameterDomain(format!(
                "row {} takes {} parameter(s) ({}), got {}",
                self.key,
                self.params.len(),
                self.param_names().join(", "),
                values.len()
            )));
        }
        for (spec, v) in self.params.iter().zip(values) {
            spec.domain.check(&spec.name, v)?;
        }
        Ok(())
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    /// `name=value` pairs, for reports.
    pub fn describe_params(&self, values: &[Param]) -> String {
        self.params
            .iter()
            .zip(values)
            .map(|(p, v)| format!("{}={v}", p.name))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn lookup<'a>(&'a self, values: &'a [Param], name: &str) -> Option<&'a Param> {
        let target = self.aliases.get(name).map(String::as_str).unwrap_or(name);
        self.params.iter().position(|p| p.name == target).map(|i| &values[i])
    }

    fn eval_mapping(&self, v: &MapValue, values: &[Param]) -> Result<Option<Param>> {
        let MapValue::Expr(e) = v else { return Ok(None) };
        if values.iter().all(Param::is_exact) {
            let q = e.eval_exact(&|name| self.lookup(values, name).and_then(|p| p.as_rational().cloned()))?;
            Ok(Some(Param::Exact(q)))
        } else {
            Ok(Some(Param::Float(e.eval_f64(&|name| self.lookup(values, name).map(Param::to_f64))?)))
        }
    }

    fn mapped_index(&self, v: &MapValue, values: &[Param]) -> Result<ExtendedIndex> {
        match self.eval_mapping(v, values)? {
            None => Ok(ExtendedIndex::Infinity),
            Some(Param::Exact(q)) if q.is_integer() && q.is_positive() => {
                let n = q.to_integer().to_u32().ok_or_else(|| Error::ParameterDomain(format!("index {q} too large")))?;
                ExtendedIndex::finite(n)
            }
            Some(p) => Err(Error::ParameterDomain(format!("row {}: index evaluates to {p}", self.key))),
        }
    }

    fn mapped_param(&self, v: &MapValue, values: &[Param]) -> Result<Param> {
        self.eval_mapping(v, values)?
            .ok_or_else(|| Error::Registry(format!("row {}: Jacobi parameter mapped to inf", self.key)))
    }

    fn mapped_rate(&self, v: &MapValue, values: &[Param]) -> Result<ExtendedRate> {
        Ok(match self.eval_mapping(v, values)? {
            None => ExtendedRate::Infinity,
            Some(p) => ExtendedRate::Finite(p),
        })
    }

    /// The BEJ composition this row names, at the given parameters.
    pub fn spec(&self, values: &[Param]) -> Result<BejSpec> {
        self.check_params(values)?;
        Ok(match &self.mapping {
            Mapping::TypeI { m, n, r, a, b } => BejSpec::TypeI(Bej1Spec::new(
                self.mapped_index(m, values)?,
                self.mapped_index(n, values)?,
                self.mapped_rate(r, values)?,
                self.mapped_param(a, values)?,
                self.mapped_param(b, values)?,
            )?),
            Mapping::TypeII { n, s, c, d, r, a, b } => BejSpec::TypeII(Bej2Spec::new(
                self.mapped_index(n, values)?,
                self.mapped_rate(s, values)?,
                self.mapped_param(c, values)?,
                self.mapped_param(d, values)?,
                self.mapped_rate(r, values)?,
                self.mapped_param(a, values)?,
                self.mapped_param(b, values)?,
            )?),
        })
    }

    pub fn descriptor(&self, values: &[Param]) -> Result<OperatorDescriptor> {
        self.spec(values)?.descriptor()
    }

    fn printed(&self, column: Column) -> Result<&Formula> {
        self.formula(column)
            .ok_or_else(|| Error::Registry(format!("row {} has no printed {column} column", self.key)))
    }

    fn eval_formula_f64(&self, e: &Expr, values: &[Param], x: f64) -> Result<f64> {
        self.check_params(values)?;
        e.eval_f64(&|name| match name {
            "x" => Some(x),
            "X" => Some(x * (1.0 - x)),
            _ => self.lookup(values, name).map(Param::to_f64),
        })
    }

    fn eval_formula_exact(&self, e: &Expr, values: &[Param], x: &BigRational) -> Result<BigRational> {
        self.check_params(values)?;
        if let Some(p) = values.iter().find(|p| !p.is_exact()) {
            return Err(Error::UnsupportedExactParameter(p.to_string()));
        }
        let big_x = x * (BigRational::from_integer(1.into()) - x);
        e.eval_exact(&|name| match name {
            "x" => Some(x.clone()),
            "X" => Some(big_x.clone()),
            _ => self.lookup(values, name).and_then(|p| p.as_rational().cloned()),
        })
    }

    /// The printed formula of `column`, evaluated verbatim.
    pub fn value(&self, column: Column, values: &[Param], x: f64) -> Result<f64> {
        self.eval_formula_f64(&self.printed(column)?.expr, values, x)
    }

    pub fn value_exact(&self, column: Column, values: &[Param], x: &BigRational) -> Result<BigRational> {
        self.eval_formula_exact(&self.printed(column)?.expr, values, x)
    }
}

/// Printed second moment of `row` at `x`.
pub fn table_moment(row: &NamedOperatorRow, params: &[Param], x: f64) -> Result<f64> {
    row.value(Column::SecondMoment, params, x)
}

/// Printed first moment of `row` at `x`.
pub fn table_first_moment(row: &NamedOperatorRow, params: &[Param], x: f64) -> Result<f64> {
    row.value(Column::FirstMoment, params, x)
}

/// Printed `T(e1, e1; x)` of `row` at `x`.
pub fn table_t11(row: &NamedOperatorRow, params: &[Param], x: f64) -> Result<f64> {
    row.value(Column::T11, params, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MismatchPoint {
    pub params: String,
    pub x: String,
    pub oracle: String,
    pub printed: String,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErratumCheck {
    pub corrected: String,
    pub note: String,
    /// The corrected formula equals the oracle at every tested point.
    pub corrected_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnReport {
    pub column: Column,
    pub printed: String,
    pub verdict: Verdict,
    pub max_abs_discrepancy: f64,
    pub mismatches: Vec<MismatchPoint>,
    pub erratum: Option<ErratumCheck>,
}

impl ColumnReport {
    /// A mismatch explained by an erratum whose correction checks out.
    pub fn is_documented(&self) -> bool {
        self.erratum.as_ref().is_some_and(|e| e.corrected_matches)
    }

    pub fn is_undocumented_mismatch(&self) -> bool {
        self.verdict == Verdict::Mismatch && !self.is_documented()
    }

    /// An erratum attached to a formula that already matches.
    pub fn is_stale_erratum(&self) -> bool {
        self.verdict == Verdict::Match && self.erratum.is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconciliationReport {
    pub key: String,
    pub table: u32,
    pub t11_table: Option<u32>,
    pub instances: Vec<String>,
    pub x_points: Vec<String>,
    /// The general closed forms agree with the oracle on every instance.
    pub closed_form_matches_oracle: bool,
    pub columns: Vec<ColumnReport>,
}

impl ReconciliationReport {
    pub fn column(&self, c: Column) -> Option<&ColumnReport> {
        self.columns.iter().find(|r| r.column == c)
    }

    pub fn undocumented_mismatches(&self) -> usize {
        self.columns.iter().filter(|c| c.is_undocumented_mismatch()).count()
    }
}

/// Rational points at which printed formulas are compared.
pub fn reconcile_points() -> Vec<BigRational> {
    [(0, 1), (1, 5), (1, 4), (1, 2), (2, 3), (3, 4), (1, 1)]
        .iter()
        .map(|&(p, q)| rational(p, q))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Registry {
    tables: Vec<TableInfo>,
    rows: Vec<NamedOperatorRow>,
    errata: Vec<Erratum>,
}

impl Registry {
    /// The registry compiled into the library.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::from_toml(ROWS_TOML, ERRATA_TOML).expect("bundled registry is valid"))
    }

    /// The bundled rows with a replacement errata file.
    pub fn with_errata(errata: &str) -> Result<Self> {
        Registry::from_toml(ROWS_TOML, errata)
    }

    pub fn from_toml(rows: &str, errata: &str) -> Result<Self> {
        let rows: RowsFile = toml::from_str(rows).map_err(|e| Error::Registry(e.to_string()))?;
        let errata: ErrataFile = toml::from_str(errata).map_err(|e| Error::Registry(e.to_string()))?;
        for v in [rows.version, errata.version] {
            if v != FORMAT_VERSION {
                return Err(Error::Registry(format!("unsupported format version {v}")));
            }
        }
        let parsed = rows.row.into_iter().map(NamedOperatorRow::from_record).collect::<Result<Vec<_>>>()?;
        let reg = Registry { tables: rows.table, rows: parsed, errata: errata.erratum };
        for e in &reg.errata {
            let row = reg.row(&e.key)?;
            if row.formula(e.column).is_none() {
                return Err(Error::Registry(format!("erratum for missing column {}.{}", e.key, e.column)));
            }
            reg.corrected_expr(row, e)?;
        }
        Ok(reg)
    }

    pub fn rows(&self) -> &[NamedOperatorRow] {
        &self.rows
    }

    pub fn errata(&self) -> &[Erratum] {
        &self.errata
    }

    pub fn row(&self, key: &str) -> Result<&NamedOperatorRow> {
        self.rows.iter().find(|r| r.key == key).ok_or_else(|| Error::UnknownRow(key.to_string()))
    }

    pub fn table_info(&self, number: u32) -> Result<&TableInfo> {
        self.tables.iter().find(|t| t.number == number).ok_or(Error::UnknownTable(number))
    }

    /// Rows shown in a table: second moments for tables 1-5, the first
    /// moment and T(e1,e1;x) columns for tables 6-7.
    pub fn table(&self, number: u32) -> Result<Vec<&NamedOperatorRow>> {
        self.table_info(number)?;
        Ok(self
            .rows
            .iter()
            .filter(|r| if number <= 5 { r.table == number } else { r.t11_table == Some(number) })
            .collect())
    }

    /// Columns a table displays.
    pub fn table_columns(number: u32) -> &'static [Column] {
        if number <= 5 {
            &[Column::SecondMoment]
        } else {
            &[Column::FirstMoment, Column::T11]
        }
    }

    pub fn erratum(&self, key: &str, column: Column) -> Option<&Erratum> {
        self.errata.iter().find(|e| e.key == key && e.column == column)
    }

    fn corrected_expr(&self, row: &NamedOperatorRow, e: &Erratum) -> Result<Expr> {
        let mut vars = vec!["x", "X"];
        vars.extend(row.param_names());
        vars.extend(row.aliases.keys().map(String::as_str));
        parse_with_vars(&e.corrected, &vars).map_err(|err| Error::Registry(format!("erratum {}.{}: {err}", e.key, e.column)))
    }

    /// Compares every printed column of `row` with the oracle on all default
    /// instantiations and [`reconcile_points`].
    pub fn reconcile(&self, row: &NamedOperatorRow) -> Result<ReconciliationReport> {
        let xs = reconcile_points();
        let mut closed_ok = true;
        let mut oracle: Vec<[RationalPolynomial; 3]> = Vec::new();
        for inst in &row.instances {
            let spec = row.spec(inst)?;
            let op = spec.descriptor()?;
            let polys = [central_moment_exact(&op, 2)?, central_moment_exact(&op, 1)?, t11_exact(&op)?];
            for x in &xs {
                let m = moments_exact(&spec, x)?;
                closed_ok &= m.second == polys[0].eval(x) && m.first == polys[1].eval(x) && m.t11 == polys[2].eval(x);
            }
            oracle.push(polys);
        }
        let mut columns = Vec::new();
        for column in row.columns() {
            let idx = match column {
                Column::SecondMoment => 0,
                Column::FirstMoment => 1,
                Column::T11 => 2,
            };
            let printed = row.printed(column)?;
            let erratum = self.erratum(&row.key, column);
            let corrected = erratum.map(|e| self.corrected_expr(row, e)).transpose()?;
            let mut mismatches = Vec::new();
            let mut max_abs = 0.0f64;
            let mut corrected_ok = true;
            for (inst, polys) in row.instances.iter().zip(&oracle) {
                for x in &xs {
                    let want = polys[idx].eval(x);
                    let got = row.eval_formula_exact(&printed.expr, inst, x);
                    if let Some(c) = &corrected {
                        corrected_ok &= row.eval_formula_exact(c, inst, x).is_ok_and(|v| v == want);
                    }
                    let (shown, diff) = match &got {
                        Ok(v) if *v == want => continue,
                        Ok(v) => (v.to_string(), rational_to_f64(&(v - &want).abs())),
                        Err(_) => ("undefined".to_string(), f64::INFINITY),
                    };
                    max_abs = max_abs.max(diff);
                    mismatches.push(MismatchPoint {
                        params: row.describe_params(inst),
                        x: x.to_string(),
                        oracle: want.to_string(),
                        printed: shown,
                        discrepancy: diff,
                    });
                }
            }
            columns.push(ColumnReport {
                column,
                printed: printed.text.clone(),
                verdict: if mismatches.is_empty() { Verdict::Match } else { Verdict::Mismatch },
                max_abs_discrepancy: max_abs,
                mismatches,
                erratum: erratum.map(|e| ErratumCheck {
                    corrected: e.corrected.clone(),
                    note: e.note.clone(),
                    corrected_matches: corrected_ok,
                }),
            });
        }
        Ok(ReconciliationReport {
            key: row.key.clone(),
            table: row.table,
            t11_table: row.t11_table,
            instances: row.instances.iter().map(|i| row.describe_params(i)).collect(),
            x_points: xs.iter().map(|x| x.to_string()).collect(),
            closed_form_matches_oracle: closed_ok,
            columns,
        })
    }

    pub fn reconcile_all(&self) -> Result<Vec<ReconciliationReport>> {
        self.rows.iter().map(|r| self.reconcile(r)).collect()
    }
}

/// Reconciles a row of the built-in registry.
pub fn reconcile(row: &NamedOperatorRow) -> Result<ReconciliationReport> {
    Registry::builtin().reconcile(row)
}

/// Oracle value of a column at an exact point.
pub fn oracle_value(row: &NamedOperatorRow, column: Column, values: &[Param], x: &BigRational) -> Result<BigRational> {
    let op = row.descriptor(values)?;
    let poly = match column {
        Column::SecondMoment => central_moment_exact(&op, 2)?,
        Column::FirstMoment => central_moment_exact(&op, 1)?,
        Column::T11 => t11_exact(&op)?,
    };
    Ok(poly.eval(x))
}
