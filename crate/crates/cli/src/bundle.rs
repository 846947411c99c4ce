//! Parsing, validating and emitting presentation bundles.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use dgcat::category::{densify, validate_dg_category, CategoryBuilder, DgCategory};
use dgcat::complex::Complex;
use dgcat::field::Field;
use dgcat::functor::{validate_dg_functor, DgFunctor};
use dgcat::graded::{GradedMap, GradedSpace};
use dgcat::linalg::Matrix;
use dgcat::module::{validate_dg_module, Bimodule, DgModule};
use dgcat::report::ValidationReport;
use indexmap::IndexMap;
use thiserror::Error;

use crate::format::{
    ActionFile, BimoduleFile, BundleFile, CategoryFile, ComplexFile, CompositionBlock, FunctorFile, Graded, HomFile,
    HomMatrix, ModuleFile, PairValue, PartialAction, Row, SubcategoryFile, SuiteDirective, FORMAT,
};

/// Every way a bundle can be rejected. `field` is a dotted path into the
/// JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: unknown degree `{degree}`")]
    UnknownDegree { field: String, degree: String },
    #[error("{field}: expected shape {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: String,
        found: String,
    },
    #[error("{field}: unknown name `{name}`")]
    UnknownName { field: String, name: String },
    #[error("{field}: bad scalar: {message}")]
    Scalar { field: String, message: String },
    #[error("{field}: {message}")]
    Structure { field: String, message: String },
    #[error("{field}: validation failed: {}", violations.join("; "))]
    Validation { field: String, violations: Vec<String> },
}

impl BundleError {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            BundleError::Io { .. } => "io",
            BundleError::Syntax { .. } => "syntax",
            BundleError::UnknownDegree { .. } => "unknown-degree",
            BundleError::DimensionMismatch { .. } => "dimension-mismatch",
            BundleError::UnknownName { .. } => "unknown-name",
            BundleError::Scalar { .. } => "scalar",
            BundleError::Structure { .. } => "structure",
            BundleError::Validation { .. } => "validation",
        }
    }

    /// The JSON path the error refers to, or `line:column` for syntax errors.
    pub fn field(&self) -> String {
        match self {
            BundleError::Io { path, .. } => path.clone(),
            BundleError::Syntax { line, column, .. } => format!("{line}:{column}"),
            BundleError::UnknownDegree { field, .. }
            | BundleError::DimensionMismatch { field, .. }
            | BundleError::UnknownName { field, .. }
            | BundleError::Scalar { field, .. }
            | BundleError::Structure { field, .. }
            | BundleError::Validation { field, .. } => field.clone(),
        }
    }
}

fn structure(field: &str, e: impl fmt::Display) -> BundleError {
    BundleError::Structure {
        field: field.to_string(),
        message: e.to_string(),
    }
}

fn unknown(field: &str, name: &str) -> BundleError {
    BundleError::UnknownName {
        field: field.to_string(),
        name: name.to_string(),
    }
}

fn validated(field: &str, report: ValidationReport) -> Result<(), BundleError> {
    if report.is_valid() {
        Ok(())
    } else {
        Err(BundleError::Validation {
            field: field.to_string(),
            violations: report.violations.iter().map(|v| v.to_string()).collect(),
        })
    }
}

/// A category name, possibly with `^op`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryRef {
    pub name: String,
    pub opposite: bool,
}

impl CategoryRef {
    pub fn parse(text: &str) -> Self {
        match text.strip_suffix("^op") {
            Some(name) => CategoryRef {
                name: name.to_string(),
                opposite: true,
            },
            None => CategoryRef {
                name: text.to_string(),
                opposite: false,
            },
        }
    }
}

impl fmt::Display for CategoryRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, if self.opposite { "^op" } else { "" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedFunctor<F> {
    pub source: String,
    pub target: String,
    pub functor: DgFunctor<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModule<F> {
    pub category: String,
    pub module: DgModule<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedBimodule<F> {
    pub first: CategoryRef,
    pub second: CategoryRef,
    pub bimodule: Bimodule<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcategory {
    pub category: String,
    pub objects: Vec<String>,
}

/// A fully validated bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle<F> {
    pub categories: BTreeMap<String, DgCategory<F>>,
    pub functors: BTreeMap<String, NamedFunctor<F>>,
    pub modules: BTreeMap<String, NamedModule<F>>,
    pub bimodules: BTreeMap<String, NamedBimodule<F>>,
    pub subcategories: BTreeMap<String, Subcategory>,
    pub suites: Vec<SuiteDirective>,
}

impl<F> Default for Bundle<F> {
    fn default() -> Self {
        Bundle {
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            modules: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            subcategories: BTreeMap::new(),
            suites: Vec::new(),
        }
    }
}

impl<F: Field> Bundle<F> {
    pub fn category(&self, r: &CategoryRef) -> Option<DgCategory<F>> {
        let c = self.categories.get(&r.name)?;
        Some(if r.opposite { c.opposite() } else { c.clone() })
    }
}

pub fn parse_bundle<F: Field>(path: &Path) -> Result<Bundle<F>, BundleError> {
    let text = std::fs::read_to_string(path).map_err(|e| BundleError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_str(&text)
}

pub fn parse_str<F: Field>(text: &str) -> Result<Bundle<F>, BundleError> {
    let file: BundleFile = serde_json::from_str(text).map_err(|e| BundleError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_file(&file)
}

/// Canonical text: pretty JSON with a trailing newline.
pub fn emit<F: Field>(bundle: &Bundle<F>) -> String {
    let mut text = serde_json::to_string_pretty(&to_file(bundle)).expect("bundle serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// Reading

fn degree(field: &str, key: &str) -> Result<i32, BundleError> {
    match key.parse::<i32>() {
        Ok(d) if d.to_string() == key => Ok(d),
        _ => Err(BundleError::UnknownDegree {
            field: field.to_string(),
            degree: key.to_string(),
        }),
    }
}

fn scalar<F: Field>(field: &str, text: &str) -> Result<F, BundleError> {
    F::parse_scalar(text).map_err(|e| BundleError::Scalar {
        field: field.to_string(),
        message: e.to_string(),
    })
}

fn row<F: Field>(field: &str, row: &[String], len: usize) -> Result<Vec<F>, BundleError> {
    if row.len() != len {
        return Err(BundleError::DimensionMismatch {
            field: field.to_string(),
            expected: len.to_string(),
            found: row.len().to_string(),
        });
    }
    row.iter()
        .enumerate()
        .map(|(i, s)| scalar(&format!("{field}[{i}]"), s))
        .collect()
}

fn matrix<F: Field>(field: &str, rows: &[Row], shape: (usize, usize)) -> Result<Matrix<F>, BundleError> {
    let bad_row = rows.iter().find(|r| r.len() != shape.1);
    if rows.len() != shape.0 || bad_row.is_some() {
        let cols = bad_row.or(rows.first()).map_or(0, Vec::len);
        return Err(BundleError::DimensionMismatch {
            field: field.to_string(),
            expected: format!("{}×{}", shape.0, shape.1),
            found: format!("{}×{}", rows.len(), cols),
        });
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| row(&format!("{field}[{i}]"), r, shape.1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(parsed, shape.1))
}

fn complex<F: Field>(
    field: &str,
    basis: &Graded<Vec<String>>,
    differential: &Graded<Vec<Row>>,
) -> Result<Complex<F>, BundleError> {
    let mut parts = BTreeMap::new();
    for (key, labels) in basis {
        let d = degree(&format!("{field}.basis"), key)?;
        if !labels.is_empty() {
            parts.insert(d, labels.clone());
        }
    }
    let space = GradedSpace::new(parts).map_err(|e| structure(&format!("{field}.basis"), e))?;
    let mut blocks = BTreeMap::new();
    for (key, rows) in differential {
        let f = format!("{field}.differential.{key}");
        let d = degree(&f, key)?;
        if space.dim(d) == 0 {
            return Err(BundleError::UnknownDegree {
                field: f,
                degree: key.clone(),
            });
        }
        blocks.insert(d, matrix(&f, rows, (space.dim(d + 1), space.dim(d)))?);
    }
    let d = GradedMap::from_blocks(&space, &space, 1, blocks)
        .map_err(|e| structure(&format!("{field}.differential"), e))?;
    Complex::new(space, d).map_err(|e| structure(field, e))
}

fn object(c: &DgCategory<impl Field>, field: &str, label: &str) -> Result<usize, BundleError> {
    c.index_of(label).map_err(|_| unknown(field, label))
}

fn basis_index(space: &GradedSpace, field: &str, label: &str) -> Result<usize, BundleError> {
    space.find(label).ok_or_else(|| unknown(field, label))
}

fn read_category<F: Field>(field: &str, file: &CategoryFile) -> Result<DgCategory<F>, BundleError> {
    let mut b = CategoryBuilder::new();
    for (i, label) in file.objects.iter().enumerate() {
        b.object(label)
            .map_err(|e| structure(&format!("{field}.objects[{i}]"), e))?;
    }
    let index = |b: &CategoryBuilder<F>, f: &str, label: &str| b.index_of(label).map_err(|_| unknown(f, label));
    for (i, hom) in file.homs.iter().enumerate() {
        let f = format!("{field}.homs[{i}]");
        let x = index(&b, &format!("{f}.source"), &hom.source)?;
        let y = index(&b, &format!("{f}.target"), &hom.target)?;
        if b.hom_of(x, y).is_some() {
            return Err(structure(
                &f,
                format!("hom({}, {}) given twice", hom.source, hom.target),
            ));
        }
        b.hom(x, y, complex(&f, &hom.basis, &hom.differential)?);
    }
    let dim = |b: &CategoryBuilder<F>, x: usize, y: usize| b.hom_of(x, y).map_or(0, Complex::total_dim);
    for (label, v) in &file.identities {
        let f = format!("{field}.identities.{label}");
        let x = index(&b, &f, label)?;
        let v = row(&f, v, dim(&b, x, x))?;
        b.identity(x, v);
    }
    for (i, block) in file.composition.iter().enumerate() {
        let f = format!("{field}.composition[{i}]");
        let x = index(&b, &format!("{f}.source"), &block.source)?;
        let y = index(&b, &format!("{f}.middle"), &block.middle)?;
        let z = index(&b, &format!("{f}.target"), &block.target)?;
        let empty = GradedSpace::zero();
        let space = |x: usize, y: usize| b.hom_of(x, y).map_or(empty.clone(), |c| c.space().clone());
        let (left, right) = (space(y, z), space(x, y));
        let len = dim(&b, x, z);
        let mut entries = Vec::new();
        for (k, (g, h, result)) in block.entries.iter().enumerate() {
            let fe = format!("{f}.entries[{k}]");
            let gi = basis_index(&left, &fe, g)?;
            let hi = basis_index(&right, &fe, h)?;
            entries.push((gi, hi, row(&fe, result, len)?));
        }
        for (gi, hi, v) in entries {
            b.compose(x, y, z, gi, hi, v);
        }
    }
    let c = b.build().map_err(|e| structure(field, e))?;
    validated(field, validate_dg_category(&c))?;
    Ok(c)
}

fn named<'a, T>(map: &'a BTreeMap<String, T>, field: &str, name: &str) -> Result<&'a T, BundleError> {
    map.get(name).ok_or_else(|| unknown(field, name))
}

fn read_functor<F: Field>(
    field: &str,
    file: &FunctorFile,
    cats: &BTreeMap<String, DgCategory<F>>,
) -> Result<NamedFunctor<F>, BundleError> {
    let s = named(cats, &format!("{field}.source"), &file.source)?;
    let t = named(cats, &format!("{field}.target"), &file.target)?;
    let mut objects = vec![None; s.object_count()];
    for (x, y) in &file.objects {
        let f = format!("{field}.objects.{x}");
        objects[object(s, &f, x)?] = Some(object(t, &f, y)?);
    }
    let objects = objects
        .iter()
        .enumerate()
        .map(|(x, o)| o.ok_or_else(|| structure(&format!("{field}.objects"), format!("no image for `{}`", s.label(x)))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut maps = BTreeMap::new();
    for (i, h) in file.homs.iter().enumerate() {
        let f = format!("{field}.homs[{i}]");
        let x = object(s, &format!("{f}.source"), &h.source)?;
        let y = object(s, &format!("{f}.target"), &h.target)?;
        let shape = (t.hom_dim(objects[x], objects[y]), s.hom_dim(x, y));
        maps.insert((x, y), matrix(&format!("{f}.matrix"), &h.matrix, shape)?);
    }
    let functor = DgFunctor::new(s, t, objects.clone(), |x, y| {
        maps.remove(&(x, y))
            .unwrap_or_else(|| Matrix::zeros(t.hom_dim(objects[x], objects[y]), s.hom_dim(x, y)))
    })
    .map_err(|e| structure(field, e))?;
    validated(field, validate_dg_functor(&functor))?;
    Ok(NamedFunctor {
        source: file.source.clone(),
        target: file.target.clone(),
        functor,
    })
}

fn values<F: Field>(
    field: &str,
    c: &DgCategory<F>,
    file: &IndexMap<String, ComplexFile>,
) -> Result<Vec<Complex<F>>, BundleError> {
    let mut out = vec![Complex::zero(); c.object_count()];
    for (label, v) in file {
        let f = format!("{field}.{label}");
        out[object(c, &f, label)?] = complex(&f, &v.basis, &v.differential)?;
    }
    Ok(out)
}

/// A basis action as a graded map of the morphism's degree.
fn action<F: Field>(
    field: &str,
    source: &Complex<F>,
    target: &Complex<F>,
    degree: i32,
    rows: &[Row],
) -> Result<GradedMap<F>, BundleError> {
    let m = matrix(
        &format!("{field}.matrix"),
        rows,
        (target.total_dim(), source.total_dim()),
    )?;
    GradedMap::from_matrix(source.space(), target.space(), degree, &m)
        .map_err(|e| structure(&format!("{field}.matrix"), e))
}

fn read_module<F: Field>(
    field: &str,
    file: &ModuleFile,
    cats: &BTreeMap<String, DgCategory<F>>,
) -> Result<NamedModule<F>, BundleError> {
    let c = named(cats, &format!("{field}.category"), &file.category)?;
    let vals = values(&format!("{field}.values"), c, &file.values)?;
    let mut acts = BTreeMap::new();
    for (i, a) in file.actions.iter().enumerate() {
        let f = format!("{field}.actions[{i}]");
        let x = object(c, &format!("{f}.source"), &a.source)?;
        let y = object(c, &format!("{f}.target"), &a.target)?;
        let k = basis_index(c.hom(x, y).space(), &format!("{f}.morphism"), &a.morphism)?;
        acts.insert(
            (x, y, k),
            action(&f, &vals[x], &vals[y], c.basis_degree(x, y, k), &a.matrix)?,
        );
    }
    let module = DgModule::new(c, vals.clone(), |x, y, k| {
        acts.remove(&(x, y, k))
            .unwrap_or_else(|| GradedMap::zero(vals[x].space(), vals[y].space(), c.basis_degree(x, y, k)))
    })
    .map_err(|e| structure(field, e))?;
    validated(field, validate_dg_module(&module))?;
    Ok(NamedModule {
        category: file.category.clone(),
        module,
    })
}

fn read_bimodule<F: Field>(
    field: &str,
    file: &BimoduleFile,
    cats: &BTreeMap<String, DgCategory<F>>,
) -> Result<NamedBimodule<F>, BundleError> {
    let resolve = |f: &str, text: &str| {
        let r = CategoryRef::parse(text);
        let c = named(cats, f, &r.name)?;
        Ok::<_, BundleError>((if r.opposite { c.opposite() } else { c.clone() }, r))
    };
    let (a, first) = resolve(&format!("{field}.first"), &file.first)?;
    let (b, second) = resolve(&format!("{field}.second"), &file.second)?;
    let nb = b.object_count();
    let mut vals = vec![Complex::zero(); a.object_count() * nb];
    for (i, v) in file.values.iter().enumerate() {
        let f = format!("{field}.values[{i}]");
        let x = object(&a, &format!("{f}.first"), &v.first)?;
        let y = object(&b, &format!("{f}.second"), &v.second)?;
        vals[x * nb + y] = complex(&f, &v.basis, &v.differential)?;
    }
    let value = |x: usize, y: usize| &vals[x * nb + y];
    let mut firsts = BTreeMap::new();
    for (i, p) in file.first_actions.iter().enumerate() {
        let f = format!("{field}.first_actions[{i}]");
        let x = object(&a, &format!("{f}.source"), &p.source)?;
        let x2 = object(&a, &format!("{f}.target"), &p.target)?;
        let y = object(&b, &format!("{f}.at"), &p.at)?;
        let k = basis_index(a.hom(x, x2).space(), &format!("{f}.morphism"), &p.morphism)?;
        firsts.insert(
            (k, x, x2, y),
            action(&f, value(x, y), value(x2, y), a.basis_degree(x, x2, k), &p.matrix)?,
        );
    }
    let mut seconds = BTreeMap::new();
    for (i, p) in file.second_actions.iter().enumerate() {
        let f = format!("{field}.second_actions[{i}]");
        let y = object(&b, &format!("{f}.source"), &p.source)?;
        let y2 = object(&b, &format!("{f}.target"), &p.target)?;
        let x = object(&a, &format!("{f}.at"), &p.at)?;
        let k = basis_index(b.hom(y, y2).space(), &format!("{f}.morphism"), &p.morphism)?;
        seconds.insert(
            (k, x, y, y2),
            action(&f, value(x, y), value(x, y2), b.basis_degree(y, y2, k), &p.matrix)?,
        );
    }
    let bimodule =
        Bimodule::from_actions(
            &a,
            &b,
            |x, y| value(x, y).clone(),
            |k, x, x2, y| {
                firsts.get(&(k, x, x2, y)).cloned().unwrap_or_else(|| {
                    GradedMap::zero(value(x, y).space(), value(x2, y).space(), a.basis_degree(x, x2, k))
                })
            },
            |k, x, y, y2| {
                seconds.get(&(k, x, y, y2)).cloned().unwrap_or_else(|| {
                    GradedMap::zero(value(x, y).space(), value(x, y2).space(), b.basis_degree(y, y2, k))
                })
            },
        )
        .map_err(|e| structure(field, e))?;
    validated(field, validate_dg_module(bimodule.module()))?;
    Ok(NamedBimodule {
        first,
        second,
        bimodule,
    })
}

fn check_directive<F>(field: &str, d: &SuiteDirective, b: &Bundle<F>) -> Result<(), BundleError> {
    let check = |key: &str, name: &Option<String>, present: &dyn Fn(&str) -> bool| match name {
        Some(n) if !present(n) => Err(unknown(&format!("{field}.{key}"), n)),
        _ => Ok(()),
    };
    check("category", &d.category, &|n| b.categories.contains_key(n))?;
    check("subcategory", &d.subcategory, &|n| b.subcategories.contains_key(n))?;
    check("functor", &d.functor, &|n| b.functors.contains_key(n))?;
    check("module", &d.module, &|n| b.modules.contains_key(n))?;
    check("bimodule", &d.bimodule, &|n| b.bimodules.contains_key(n))
}

/// Build every object of the file and run its validator, in dependency
/// order: categories, functors, modules, bimodules, subcategories, suites.
pub fn from_file<F: Field>(file: &BundleFile) -> Result<Bundle<F>, BundleError> {
    if file.format != FORMAT {
        return Err(structure(
            "format",
            format!("expected `{FORMAT}`, found `{}`", file.format),
        ));
    }
    let mut b = Bundle::default();
    for (name, c) in &file.categories {
        let c = read_category(&format!("categories.{name}"), c)?;
        b.categories.insert(name.clone(), c);
    }
    for (name, f) in &file.functors {
        let f = read_functor(&format!("functors.{name}"), f, &b.categories)?;
        b.functors.insert(name.clone(), f);
    }
    for (name, m) in &file.modules {
        let m = read_module(&format!("modules.{name}"), m, &b.categories)?;
        b.modules.insert(name.clone(), m);
    }
    for (name, m) in &file.bimodules {
        let m = read_bimodule(&format!("bimodules.{name}"), m, &b.categories)?;
        b.bimodules.insert(name.clone(), m);
    }
    for (name, s) in &file.subcategories {
        let field = format!("subcategories.{name}");
        let c = named(&b.categories, &format!("{field}.category"), &s.category)?;
        for (i, o) in s.objects.iter().enumerate() {
            object(c, &format!("{field}.objects[{i}]"), o)?;
        }
        b.subcategories.insert(
            name.clone(),
            Subcategory {
                category: s.category.clone(),
                objects: s.objects.clone(),
            },
        );
    }
    for (i, d) in file.suites.iter().enumerate() {
        check_directive(&format!("suites[{i}]"), d, &b)?;
    }
    b.suites = file.suites.clone();
    Ok(b)
}

// ---------------------------------------------------------------------------
// Writing

fn text_row<F: Field>(v: &[F]) -> Row {
    v.iter().map(F::to_string).collect()
}

fn text_matrix<F: Field>(m: &Matrix<F>) -> Vec<Row> {
    (0..m.rows()).map(|i| text_row(m.row(i))).collect()
}

fn write_complex<F: Field>(c: &Complex<F>) -> ComplexFile {
    let space = c.space();
    let basis = space.parts().iter().map(|(d, l)| (d.to_string(), l.clone())).collect();
    let differential = space
        .support()
        .filter(|&d| space.dim(d + 1) > 0)
        .map(|d| (d, c.d_block(d)))
        .filter(|(_, m)| !m.is_zero())
        .map(|(d, m)| (d.to_string(), text_matrix(&m)))
        .collect();
    ComplexFile { basis, differential }
}

fn write_category<F: Field>(c: &DgCategory<F>) -> CategoryFile {
    let n = c.object_count();
    let mut homs = Vec::new();
    let mut composition = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if c.hom_dim(x, y) == 0 {
                continue;
            }
            let ComplexFile { basis, differential } = write_complex(c.hom(x, y));
            homs.push(HomFile {
                source: c.label(x).to_string(),
                target: c.label(y).to_string(),
                basis,
                differential,
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut entries = Vec::new();
                for g in 0..c.hom_dim(y, z) {
                    for f in 0..c.hom_dim(x, y) {
                        let v = c.compose_basis(x, y, z, g, f);
                        if v.iter().any(|(_, e)| !e.is_zero()) {
                            let dense = densify(v, c.hom_dim(x, z));
                            entries.push((c.basis_label(y, z, g), c.basis_label(x, y, f), text_row(&dense)));
                        }
                    }
                }
                if !entries.is_empty() {
                    composition.push(CompositionBlock {
                        source: c.label(x).to_string(),
                        middle: c.label(y).to_string(),
                        target: c.label(z).to_string(),
                        entries,
                    });
                }
            }
        }
    }
    CategoryFile {
        objects: c.objects().to_vec(),
        homs,
        identities: (0..n)
            .map(|x| (c.label(x).to_string(), text_row(c.identity(x))))
            .collect(),
        composition,
    }
}

fn write_functor<F: Field>(f: &NamedFunctor<F>) -> FunctorFile {
    let (s, t) = (f.functor.source(), f.functor.target());
    let mut homs = Vec::new();
    for x in 0..s.object_count() {
        for y in 0..s.object_count() {
            let m = f.functor.hom_map(x, y).to_matrix();
            if !m.is_zero() {
                homs.push(HomMatrix {
                    source: s.label(x).to_string(),
                    target: s.label(y).to_string(),
                    matrix: text_matrix(&m),
                });
            }
        }
    }
    FunctorFile {
        source: f.source.clone(),
        target: f.target.clone(),
        objects: (0..s.object_count())
            .map(|x| (s.label(x).to_string(), t.label(f.functor.object(x)).to_string()))
            .collect(),
        homs,
    }
}

fn write_module<F: Field>(m: &NamedModule<F>) -> ModuleFile {
    let c = m.module.base();
    let n = c.object_count();
    let values = (0..n)
        .filter(|&x| !m.module.value(x).is_zero())
        .map(|x| (c.label(x).to_string(), write_complex(m.module.value(x))))
        .collect();
    let mut actions = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for k in 0..c.hom_dim(x, y) {
                let a = m.module.action_basis(x, y, k).to_matrix();
                if !a.is_zero() {
                    actions.push(ActionFile {
                        source: c.label(x).to_string(),
                        target: c.label(y).to_string(),
                        morphism: c.basis_label(x, y, k),
                        matrix: text_matrix(&a),
                    });
                }
            }
        }
    }
    ModuleFile {
        category: m.category.clone(),
        values,
        actions,
    }
}

fn unit<F: Field>(dim: usize, k: usize) -> Vec<F> {
    let mut e = vec![F::zero(); dim];
    e[k] = F::one();
    e
}

fn write_bimodule<F: Field>(m: &NamedBimodule<F>) -> BimoduleFile {
    let t = &m.bimodule;
    let (a, b) = (t.first(), t.second());
    let (na, nb) = (a.object_count(), b.object_count());
    let mut values = Vec::new();
    for x in 0..na {
        for y in 0..nb {
            if !t.value(x, y).is_zero() {
                let ComplexFile { basis, differential } = write_complex(t.value(x, y));
                values.push(PairValue {
                    first: a.label(x).to_string(),
                    second: b.label(y).to_string(),
                    basis,
                    differential,
                });
            }
        }
    }
    let mut first_actions = Vec::new();
    for x in 0..na {
        for x2 in 0..na {
            for k in 0..a.hom_dim(x, x2) {
                for y in 0..nb {
                    let act = t
                        .act_first(x, x2, y, &unit(a.hom_dim(x, x2), k), a.basis_degree(x, x2, k))
                        .to_matrix();
                    if !act.is_zero() {
                        first_actions.push(PartialAction {
                            source: a.label(x).to_string(),
                            target: a.label(x2).to_string(),
                            morphism: a.basis_label(x, x2, k),
                            at: b.label(y).to_string(),
                            matrix: text_matrix(&act),
                        });
                    }
                }
            }
        }
    }
    let mut second_actions = Vec::new();
    for y in 0..nb {
        for y2 in 0..nb {
            for k in 0..b.hom_dim(y, y2) {
                for x in 0..na {
                    let act = t
                        .act_second(x, y, y2, &unit(b.hom_dim(y, y2), k), b.basis_degree(y, y2, k))
                        .to_matrix();
                    if !act.is_zero() {
                        second_actions.push(PartialAction {
                            source: b.label(y).to_string(),
                            target: b.label(y2).to_string(),
                            morphism: b.basis_label(y, y2, k),
                            at: a.label(x).to_string(),
                            matrix: text_matrix(&act),
                        });
                    }
                }
            }
        }
    }
    BimoduleFile {
        first: m.first.to_string(),
        second: m.second.to_string(),
        values,
        first_actions,
        second_actions,
    }
}

pub fn to_file<F: Field>(b: &Bundle<F>) -> BundleFile {
    BundleFile {
        format: FORMAT.to_string(),
        categories: b
            .categories
            .iter()
            .map(|(n, c)| (n.clone(), write_category(c)))
            .collect(),
        functors: b.functors.iter().map(|(n, f)| (n.clone(), write_functor(f))).collect(),
        modules: b.modules.iter().map(|(n, m)| (n.clone(), write_module(m))).collect(),
        bimodules: b
            .bimodules
            .iter()
            .map(|(n, m)| (n.clone(), write_bimodule(m)))
            .collect(),
        subcategories: b
            .subcategories
            .iter()
            .map(|(n, s)| {
                (
                    n.clone(),
                    SubcategoryFile {
                        category: s.category.clone(),
                        objects: s.objects.clone(),
                    },
                )
            })
            .collect(),
        suites: b.suites.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_refs_round_trip() {
        for text in ["A2", "A2^op"] {
            assert_eq!(CategoryRef::parse(text).to_string(), text);
        }
        assert!(CategoryRef::parse("D1^op").opposite);
    }

    #[test]
    fn wrong_format_tag_is_rejected() {
        let err = parse_str::<dgcat::field::Rational>("{\"format\": \"other/2\"}").unwrap_err();
        assert_eq!(err.field(), "format");
    }

    #[test]
    fn empty_bundle_round_trips() {
        let text = emit(&Bundle::<dgcat::field::Rational>::default());
        assert_eq!(emit(&parse_str::<dgcat::field::Rational>(&text).unwrap()), text);
    }
}
