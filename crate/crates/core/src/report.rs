//! Validation reports and check reports shared by all modules.

use std::fmt;

/// The law a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    DifferentialSquare,
    BlockShape,
    DegreeAdditivity,
    Leibniz,
    Associativity,
    LeftUnit,
    RightUnit,
    IdentityDegree,
    ClosedIdentity,
    PreservesDegree,
    PreservesIdentity,
    PreservesComposition,
    CommutesWithDifferential,
    Naturality,
    IdealDifferential,
    IdealComposition,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::DifferentialSquare => "d^2 = 0",
            Law::BlockShape => "block shape",
            Law::DegreeAdditivity => "degree additivity",
            Law::Leibniz => "Leibniz rule",
            Law::Associativity => "associativity",
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::IdentityDegree => "identity in degree 0",
            Law::ClosedIdentity => "d(identity) = 0",
            Law::PreservesDegree => "preserves degrees",
            Law::PreservesIdentity => "preserves identities",
            Law::PreservesComposition => "preserves composition",
            Law::CommutesWithDifferential => "commutes with d",
            Law::Naturality => "naturality",
            Law::IdealDifferential => "ideal closed under d",
            Law::IdealComposition => "ideal closed under composition",
        };
        f.write_str(name)
    }
}

/// One failed instance of a law, located by object labels, basis labels and
/// (where it applies) a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub objects: Vec<String>,
    pub items: Vec<String>,
    pub degree: Option<i32>,
}

impl Violation {
    pub fn new(law: Law) -> Self {
        Violation {
            law,
            objects: Vec::new(),
            items: Vec::new(),
            degree: None,
        }
    }

    pub fn objects<S: ToString>(mut self, objects: &[S]) -> Self {
        self.objects = objects.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn items<S: ToString>(mut self, items: &[S]) -> Self {
        self.items = items.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn degree(mut self, degree: i32) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn context(mut self, context: &str) -> Self {
        self.objects.insert(0, context.to_string());
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        if !self.objects.is_empty() {
            write!(f, " at ({})", self.objects.join(", "))?;
        }
        if !self.items.is_empty() {
            write!(f, " for ({})", self.items.join(", "))?;
        }
        if let Some(d) = self.degree {
            write!(f, " in degree {d}")?;
        }
        Ok(())
    }
}

/// Result of a validator: empty iff the structure is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Prefix every violation's objects with a context label.
    pub fn in_context(mut self, context: &str) -> Self {
        for v in &mut self.violations {
            v.objects.insert(0, context.to_string());
        }
        self
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// One named check inside a larger report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// An ordered list of named checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            witness: None,
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        });
    }

    pub fn record(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) {
        if passed {
            self.pass(name);
        } else {
            self.fail(name, witness());
        }
    }

    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{status} {}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
