//! Language-neutral code-facts model.
//!
//! The model is a flat, fully-resolved snapshot of one system version:
//! packages, files, classes (with fields and methods), and a relation list.
//! Every entity carries a globally unique qualified name:
//!
//! ```text
//! package:  org.example.util
//! file:     relative/path/Foo.java
//! class:    org.example.util.Foo        (nested: org.example.util.Foo.Bar)
//! method:   org.example.util.Foo#run(2) (parameter arity, not types)
//! field:    org.example.util.Foo.count
//! ```
//!
//! Relation endpoints either resolve to an entity in the model or are marked
//! `external` (unresolved library references). External endpoints are kept in
//! the relation list but excluded from every metric computation.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Name used for classes declared without a `package` statement.
pub const DEFAULT_PACKAGE: &str = "(default)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFactsModel {
    pub system_name: String,
    pub version: String,
    pub packages: Vec<PackageEntity>,
    pub files: Vec<FileEntity>,
    pub classes: Vec<ClassEntity>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageEntity {
    pub qualified_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntity {
    /// Path relative to the corpus root, with `/` separators.
    pub path: String,
    /// Non-blank, non-comment physical lines.
    pub loc: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Class,
    Interface,
    Enum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Public,
    Protected,
    Package,
    Private,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDecl {
    pub name: String,
    pub visibility: Visibility,
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntity {
    pub qualified_name: String,
    pub kind: ClassKind,
    /// `extends` target: resolved qualified name when in-model, raw source
    /// text otherwise. `None` when the declaration has no superclass.
    pub superclass: Option<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodEntity>,
    /// Non-blank, non-comment lines in the class declaration span.
    pub loc: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub type_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodEntity {
    pub qualified_name: String,
    pub parameters: Vec<Parameter>,
    pub visibility: Visibility,
    pub is_static: bool,
    pub loc: u64,
    pub body_facts: BodyFacts,
}

/// Per-method facts extracted from the body token stream. Access lists keep
/// one entry per occurrence; call targets are distinct and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BodyFacts {
    /// One entry per decision point (`if`, `for`, `while`, `do`, `case`,
    /// `catch`, ternary `?`, `&&`, `||`), tagged by kind.
    pub decision_points: Vec<String>,
    /// Accesses to attributes of this class (declared or inherited in-model),
    /// by attribute name, one entry per occurrence.
    pub local_attribute_accesses: Vec<String>,
    /// Accesses to attributes of other in-model classes, directly or via
    /// accessor methods, one entry per occurrence.
    pub foreign_attribute_accesses: Vec<ForeignAccess>,
    /// Distinct in-model method targets this body calls.
    pub outgoing_calls: Vec<String>,
    /// Distinct variable names touched: parameters, declared locals, and
    /// accessed attribute names.
    pub accessed_variables: Vec<String>,
    pub max_nesting_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForeignAccess {
    pub owner: String,
    pub attribute: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Inherits,
    Contains,
    Calls,
    AccessesField,
    DependsOn,
}

impl RelationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelationKind::Inherits => "inherits",
            RelationKind::Contains => "contains",
            RelationKind::Calls => "calls",
            RelationKind::AccessesField => "accesses_field",
            RelationKind::DependsOn => "depends_on",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub source: String,
    pub target: String,
    /// True when the target is an unresolved library reference.
    pub external: bool,
}

impl CodeFactsModel {
    pub fn empty(system: &str, version: &str) -> Self {
        CodeFactsModel {
            system_name: system.to_string(),
            version: version.to_string(),
            packages: Vec::new(),
            files: Vec::new(),
            classes: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// Sort all entity arrays by qualified name and relations by
    /// (kind, source, target), dropping duplicate relations.
    pub fn normalize(&mut self) {
        self.packages.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        self.classes.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
        for class in &mut self.classes {
            class.methods.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
        }
        self.relations.sort();
        self.relations.dedup();
    }

    /// Every entity qualified name in the model (packages, files, classes,
    /// methods, fields).
    pub fn entity_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for p in &self.packages {
            names.insert(p.qualified_name.clone());
        }
        for f in &self.files {
            names.insert(f.path.clone());
        }
        for c in &self.classes {
            names.insert(c.qualified_name.clone());
            for m in &c.methods {
                names.insert(m.qualified_name.clone());
            }
            for fd in &c.fields {
                names.insert(format!("{}.{}", c.qualified_name, fd.name));
            }
        }
        names
    }

    pub fn class(&self, qualified_name: &str) -> Option<&ClassEntity> {
        self.classes.iter().find(|c| c.qualified_name == qualified_name)
    }

    /// Longest model package that prefixes the class qualified name. Falls
    /// back to the dotted prefix before the last segment.
    pub fn package_of_class(&self, class_qname: &str) -> String {
        let mut best: Option<&str> = None;
        for p in &self.packages {
            let q = p.qualified_name.as_str();
            let matches = if q == DEFAULT_PACKAGE {
                !class_qname.contains('.')
            } else {
                class_qname.len() > q.len()
                    && class_qname.starts_with(q)
                    && class_qname.as_bytes()[q.len()] == b'.'
            };
            if matches && best.map_or(true, |b| q.len() > b.len()) {
                best = Some(q);
            }
        }
        match best {
            Some(b) => b.to_string(),
            None => match class_qname.rsplit_once('.') {
                Some((pkg, _)) => pkg.to_string(),
                None => DEFAULT_PACKAGE.to_string(),
            },
        }
    }

    /// Map from file path to the classes it contains, from `contains` relations.
    pub fn classes_by_file(&self) -> BTreeMap<String, Vec<String>> {
        let mut by_file: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for r in &self.relations {
            if r.kind == RelationKind::Contains {
                by_file.entry(r.source.clone()).or_default().push(r.target.clone());
            }
        }
        by_file
    }

    /// In-model superclass chain of `class_qname` (nearest first). Stops at
    /// the first external superclass or on a cycle.
    pub fn superclass_chain(&self, class_qname: &str) -> Vec<&ClassEntity> {
        let mut chain = Vec::new();
        let mut seen = BTreeSet::new();
        let mut cur = self.class(class_qname);
        while let Some(c) = cur {
            let next = match &c.superclass {
                Some(s) => s,
                None => break,
            };
            if !seen.insert(next.clone()) {
                break;
            }
            match self.class(next) {
                Some(sup) => {
                    chain.push(sup);
                    cur = Some(sup);
                }
                None => break,
            }
        }
        chain
    }

    /// Validate the structural invariants the rest of the pipeline assumes.
    pub fn validate(&self) -> Result<()> {
        let mut class_names = BTreeSet::new();
        for c in &self.classes {
            if !class_names.insert(c.qualified_name.as_str()) {
                return Err(Error::Model(format!(
                    "duplicate class qualified name `{}`",
                    c.qualified_name
                )));
            }
            let mut method_names = BTreeSet::new();
            for m in &c.methods {
                if !method_names.insert(m.qualified_name.as_str()) {
                    return Err(Error::Model(format!(
                        "duplicate method qualified name `{}`",
                        m.qualified_name
                    )));
                }
            }
        }

        // Class -> file membership must be total and unique.
        let mut contained: BTreeMap<&str, &str> = BTreeMap::new();
        for r in &self.relations {
            if r.kind == RelationKind::Contains {
                if let Some(prev) = contained.insert(r.target.as_str(), r.source.as_str()) {
                    return Err(Error::Model(format!(
                        "class `{}` contained by both `{}` and `{}`",
                        r.target, prev, r.source
                    )));
                }
            }
        }
        for c in &self.classes {
            if !contained.contains_key(c.qualified_name.as_str()) {
                return Err(Error::Model(format!(
                    "class `{}` has no containing file",
                    c.qualified_name
                )));
            }
        }

        // Non-external relation endpoints must resolve to model entities.
        let entities = self.entity_names();
        for r in &self.relations {
            if !entities.contains(&r.source) {
                return Err(Error::Model(format!(
                    "relation ({}, {}, {}) has unknown source",
                    r.kind.as_str(),
                    r.source,
                    r.target
                )));
            }
            if !r.external && !entities.contains(&r.target) {
                return Err(Error::Model(format!(
                    "relation ({}, {}, {}) has non-external dangling target",
                    r.kind.as_str(),
                    r.source,
                    r.target
                )));
            }
        }
        Ok(())
    }
}

/// Owner class of a method qualified name (`pkg.Cls#m(1)` -> `pkg.Cls`).
pub fn method_owner(method_qname: &str) -> &str {
    method_qname.split('#').next().unwrap_or(method_qname)
}

/// Owner class of a field qualified name (`pkg.Cls.f` -> `pkg.Cls`).
pub fn field_owner(field_qname: &str) -> &str {
    field_qname.rsplit_once('.').map(|(o, _)| o).unwrap_or(field_qname)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model() -> CodeFactsModel {
        CodeFactsModel {
            system_name: "sys".into(),
            version: "1".into(),
            packages: vec![PackageEntity { qualified_name: "p".into() }],
            files: vec![FileEntity { path: "p/A.java".into(), loc: 3 }],
            classes: vec![ClassEntity {
                qualified_name: "p.A".into(),
                kind: ClassKind::Class,
                superclass: None,
                fields: vec![FieldDecl {
                    name: "x".into(),
                    visibility: Visibility::Private,
                    is_static: false,
                }],
                methods: vec![MethodEntity {
                    qualified_name: "p.A#m(0)".into(),
                    parameters: vec![],
                    visibility: Visibility::Public,
                    is_static: false,
                    loc: 1,
                    body_facts: BodyFacts::default(),
                }],
                loc: 3,
            }],
            relations: vec![Relation {
                kind: RelationKind::Contains,
                source: "p/A.java".into(),
                target: "p.A".into(),
                external: false,
            }],
        }
    }

    #[test]
    fn validate_accepts_consistent_model() {
        tiny_model().validate().unwrap();
    }

    #[test]
    fn validate_rejects_dangling_target() {
        let mut m = tiny_model();
        m.relations.push(Relation {
            kind: RelationKind::Calls,
            source: "p.A#m(0)".into(),
            target: "p.B#nope(0)".into(),
            external: false,
        });
        assert!(m.validate().is_err());
    }

    #[test]
    fn validate_accepts_external_target() {
        let mut m = tiny_model();
        m.relations.push(Relation {
            kind: RelationKind::Calls,
            source: "p.A#m(0)".into(),
            target: "String#length(0)".into(),
            external: true,
        });
        m.validate().unwrap();
    }

    #[test]
    fn validate_rejects_duplicate_class() {
        let mut m = tiny_model();
        let dup = m.classes[0].clone();
        m.classes.push(dup);
        assert!(m.validate().is_err());
    }

    #[test]
    fn validate_rejects_uncontained_class() {
        let mut m = tiny_model();
        m.relations.clear();
        assert!(m.validate().is_err());
    }

    #[test]
    fn package_of_class_prefers_longest_prefix() {
        let mut m = tiny_model();
        m.packages.push(PackageEntity { qualified_name: "p.q".into() });
        assert_eq!(m.package_of_class("p.A"), "p");
        assert_eq!(m.package_of_class("p.q.B"), "p.q");
    }

    #[test]
    fn owner_helpers() {
        assert_eq!(method_owner("p.A#m(2)"), "p.A");
        assert_eq!(field_owner("p.A.x"), "p.A");
    }

    #[test]
    fn normalize_sorts_and_dedups_relations() {
        let mut m = tiny_model();
        let r = m.relations[0].clone();
        m.relations.push(r);
        m.normalize();
        assert_eq!(m.relations.len(), 1);
    }
}
