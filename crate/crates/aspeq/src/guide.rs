//! User guides: placeholders, input and output predicates, and assumptions
//! restricting the admissible inputs.
//!
//! A guide file consists of `input:`, `output:`, and `assume:` statements.
//! `input: c -> integer.` abbreviates declaring the placeholder `c` together
//! with the assumption `exists N (c = N)`. An input is a pair of a
//! placeholder valuation and a set of input facts; it belongs to the domain
//! of the guide iff the induced interpretation satisfies every assumption.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::interpretation::{evaluate, EvalError, FiniteInterpretation};
use crate::parse::guide::{parse_statements, InputDecl, Statement};
use crate::parse::ParseError;
use crate::syntax::asp::{GroundAtom, PrecomputedTerm};
use crate::syntax::fol::{FolTerm, Formula, Quantifier, Variable};
use crate::syntax::Predicate;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UserGuide {
    pub placeholders: BTreeSet<String>,
    pub inputs: BTreeSet<Predicate>,
    pub outputs: BTreeSet<Predicate>,
    pub assumptions: Vec<Formula>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GuideError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}` is declared both as an input and as an output symbol")]
    InputOutputOverlap(Predicate),
    #[error("assumption mentions `{0}`, which is not an input symbol")]
    NonInputPredicate(Predicate),
    #[error("assumption has free variable `{0}`")]
    FreeVariable(String),
    #[error("`{0}:` statements are not allowed in user guide files")]
    UnexpectedStatement(String),
}

impl UserGuide {
    pub fn parse(text: &str) -> Result<UserGuide, GuideError> {
        let mut guide = UserGuide::default();
        for statement in parse_statements(text)? {
            match statement {
                Statement::Input(decls) => {
                    for decl in decls {
                        match decl {
                            InputDecl::Placeholder(name) => {
                                guide.placeholders.insert(name);
                            }
                            InputDecl::IntegerPlaceholder(name) => {
                                guide.assumptions.push(integrality_assumption(&name));
                                guide.placeholders.insert(name);
                            }
                            InputDecl::Predicate(p) => {
                                guide.inputs.insert(p);
                            }
                        }
                    }
                }
                Statement::Output(predicates) => {
                    guide.outputs.extend(predicates);
                }
                Statement::Assume(formula) => {
                    guide.assumptions.push(formula);
                }
                Statement::Spec(_) => {
                    return Err(GuideError::UnexpectedStatement("spec".into()));
                }
                Statement::Lemma(_) => {
                    return Err(GuideError::UnexpectedStatement("lemma".into()));
                }
                Statement::Axiom(_) => {
                    return Err(GuideError::UnexpectedStatement("axiom".into()));
                }
            }
        }
        guide.validate()?;
        Ok(guide)
    }

    fn validate(&self) -> Result<(), GuideError> {
        if let Some(p) = self.inputs.intersection(&self.outputs).next() {
            return Err(GuideError::InputOutputOverlap(p.clone()));
        }
        for assumption in &self.assumptions {
            if let Some(v) = assumption.free_variables().into_iter().next() {
                return Err(GuideError::FreeVariable(v.name));
            }
            for p in assumption.predicates() {
                if !self.inputs.contains(&p) {
                    return Err(GuideError::NonInputPredicate(p));
                }
            }
        }
        Ok(())
    }

    /// Predicates of the guide that are neither inputs nor outputs of the
    /// given program's predicate set are irrelevant here; a program predicate
    /// is private if it is neither an input nor an output symbol.
    pub fn is_private(&self, predicate: &Predicate) -> bool {
        !self.inputs.contains(predicate) && !self.outputs.contains(predicate)
    }

    pub fn public_predicates(&self) -> BTreeSet<Predicate> {
        self.inputs.union(&self.outputs).cloned().collect()
    }

    /// Constants mentioned by the guide's assumptions.
    pub fn constants(&self) -> BTreeSet<PrecomputedTerm> {
        let mut out = BTreeSet::new();
        for assumption in &self.assumptions {
            out.extend(assumption.constants());
        }
        out
    }
}

fn integrality_assumption(name: &str) -> Formula {
    let n = Variable::integer("N");
    Formula::Quantified(
        Quantifier::Exists,
        vec![n.clone()],
        Formula::Comparison(
            FolTerm::symbol(name),
            crate::syntax::Relation::Equal,
            FolTerm::Variable(n),
        )
        .into(),
    )
}

/// A way of running a program: placeholder values plus input facts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GuideInput {
    pub valuation: BTreeMap<String, PrecomputedTerm>,
    pub atoms: BTreeSet<GroundAtom>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("placeholder `{0}` has no value")]
    MissingPlaceholderValue(String),
    #[error("`{0}` is not a placeholder of the guide")]
    UnknownPlaceholder(String),
    #[error("placeholder `{0}` maps to a placeholder")]
    PlaceholderValue(String),
    #[error("input atom `{0}` does not use an input predicate")]
    NonInputAtom(GroundAtom),
    #[error("input atom `{0}` contains a placeholder")]
    PlaceholderInAtom(GroundAtom),
}

impl GuideInput {
    pub fn new(
        valuation: BTreeMap<String, PrecomputedTerm>,
        atoms: BTreeSet<GroundAtom>,
    ) -> GuideInput {
        GuideInput { valuation, atoms }
    }

    /// Checks conditions (i) and (ii) on inputs: the valuation is total on
    /// the placeholders and maps into non-placeholder terms; the atoms use
    /// input predicates and contain no placeholders.
    pub fn validate(&self, guide: &UserGuide) -> Result<(), InputError> {
        for placeholder in &guide.placeholders {
            if !self.valuation.contains_key(placeholder) {
                return Err(InputError::MissingPlaceholderValue(placeholder.clone()));
            }
        }
        for (name, value) in &self.valuation {
            if !guide.placeholders.contains(name) {
                return Err(InputError::UnknownPlaceholder(name.clone()));
            }
            if let PrecomputedTerm::Symbol(s) = value {
                if guide.placeholders.contains(s) {
                    return Err(InputError::PlaceholderValue(name.clone()));
                }
            }
        }
        for atom in &self.atoms {
            if !guide.inputs.contains(&atom.predicate_symbol()) {
                return Err(InputError::NonInputAtom(atom.clone()));
            }
            for term in &atom.terms {
                if let PrecomputedTerm::Symbol(s) = term {
                    if guide.placeholders.contains(s) {
                        return Err(InputError::PlaceholderInAtom(atom.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn constants(&self) -> BTreeSet<PrecomputedTerm> {
        let mut out: BTreeSet<PrecomputedTerm> = self.valuation.values().cloned().collect();
        for atom in &self.atoms {
            out.extend(atom.terms.iter().cloned());
        }
        out
    }
}

/// Finite evaluation bounds for quantifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBounds {
    pub int_range: (i64, i64),
}

impl Default for EvalBounds {
    fn default() -> Self {
        EvalBounds { int_range: (0, 20) }
    }
}

/// The finite sub-universe used to check assumptions against an input: the
/// configured integer window, widened to cover every numeral that occurs,
/// plus all occurring constants.
pub fn interpretation_for_input(
    guide: &UserGuide,
    input: &GuideInput,
    bounds: EvalBounds,
) -> FiniteInterpretation {
    let mut constants = guide.constants();
    constants.extend(input.constants());
    let (mut lo, mut hi) = bounds.int_range;
    for c in &constants {
        if let Some(n) = c.as_numeral() {
            lo = lo.min(n);
            hi = hi.max(n);
        }
    }
    let mut universe: BTreeSet<PrecomputedTerm> = (lo..=hi).map(PrecomputedTerm::Numeral).collect();
    universe.extend(constants);
    FiniteInterpretation {
        valuation: input.valuation.clone(),
        atoms: input.atoms.clone(),
        universe: Some(universe),
        int_range: Some((lo, hi)),
    }
}

/// True iff the input satisfies all assumptions of the guide.
pub fn input_in_domain(
    guide: &UserGuide,
    input: &GuideInput,
    bounds: EvalBounds,
) -> Result<bool, EvalError> {
    let interp = interpretation_for_input(guide, input, bounds);
    for assumption in &guide.assumptions {
        if !evaluate(assumption, &interp)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An ordered helper file: lemmas to prove before the goal, and verbatim
/// axioms such as induction-schema instances.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HelperFile {
    pub statements: Vec<HelperStatement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HelperStatement {
    Lemma(Formula),
    Axiom(Formula),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HelperError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}:` statements are not allowed in helper files")]
    UnexpectedStatement(String),
    #[error("helper statement has free variable `{0}`")]
    FreeVariable(String),
}

impl HelperFile {
    pub fn parse(text: &str) -> Result<HelperFile, HelperError> {
        let mut helper = HelperFile::default();
        for statement in parse_statements(text)? {
            let formula = match statement {
                Statement::Lemma(f) => {
                    helper.statements.push(HelperStatement::Lemma(f.clone()));
                    f
                }
                Statement::Axiom(f) => {
                    helper.statements.push(HelperStatement::Axiom(f.clone()));
                    f
                }
                Statement::Input(_) => {
                    return Err(HelperError::UnexpectedStatement("input".into()))
                }
                Statement::Output(_) => {
                    return Err(HelperError::UnexpectedStatement("output".into()))
                }
                Statement::Assume(_) => {
                    return Err(HelperError::UnexpectedStatement("assume".into()))
                }
                Statement::Spec(_) => return Err(HelperError::UnexpectedStatement("spec".into())),
            };
            if let Some(v) = formula.free_variables().into_iter().next() {
                return Err(HelperError::FreeVariable(v.name));
            }
        }
        Ok(helper)
    }

    pub fn lemmas(&self) -> Vec<&Formula> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                HelperStatement::Lemma(f) => Some(f),
                HelperStatement::Axiom(_) => None,
            })
            .collect()
    }

    pub fn axioms(&self) -> Vec<&Formula> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                HelperStatement::Axiom(f) => Some(f),
                HelperStatement::Lemma(_) => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::fol::parse_formula;

    pub(crate) const PRIMES_GUIDE: &str = "input: a -> integer, b -> integer.\noutput: prime/1.\n";
    pub(crate) const ORPHAN_GUIDE: &str =
        "input: living/1, father/2, mother/2.\noutput: orphan/1.\n";

    #[test]
    fn primes_guide_desugars() {
        let guide = UserGuide::parse(PRIMES_GUIDE).unwrap();
        assert_eq!(guide.placeholders, BTreeSet::from(["a".into(), "b".into()]));
        assert!(guide.inputs.is_empty());
        assert_eq!(guide.outputs, BTreeSet::from([Predicate::new("prime", 1)]));
        assert_eq!(
            guide.assumptions,
            vec![
                parse_formula("exists N (a = N)").unwrap(),
                parse_formula("exists N (b = N)").unwrap(),
            ]
        );
    }

    #[test]
    fn long_and_short_guide_forms_agree() {
        let short = UserGuide::parse(PRIMES_GUIDE).unwrap();
        let long = UserGuide::parse(
            "input: a, b.\nassume: exists N (a = N).\nassume: exists N (b = N).\noutput: prime/1.\n",
        )
        .unwrap();
        assert_eq!(short.placeholders, long.placeholders);
        assert_eq!(short.inputs, long.inputs);
        assert_eq!(short.outputs, long.outputs);
        // Same domain on a sample of inputs.
        for (a, b) in [
            (PrecomputedTerm::Numeral(10), PrecomputedTerm::Numeral(15)),
            (PrecomputedTerm::symbol("c"), PrecomputedTerm::Numeral(15)),
            (PrecomputedTerm::Numeral(0), PrecomputedTerm::symbol("d")),
        ] {
            let input = GuideInput::new(
                BTreeMap::from([("a".to_string(), a.clone()), ("b".to_string(), b.clone())]),
                BTreeSet::new(),
            );
            assert_eq!(
                input_in_domain(&short, &input, EvalBounds::default()),
                input_in_domain(&long, &input, EvalBounds::default()),
            );
        }
    }

    #[test]
    fn orphan_guide_has_no_assumptions() {
        let guide = UserGuide::parse(ORPHAN_GUIDE).unwrap();
        assert!(guide.placeholders.is_empty());
        assert_eq!(guide.inputs.len(), 3);
        assert_eq!(guide.outputs, BTreeSet::from([Predicate::new("orphan", 1)]));
        assert!(guide.assumptions.is_empty());
        // Every well-formed input is in the domain.
        let input = GuideInput::new(
            BTreeMap::new(),
            BTreeSet::from([GroundAtom::new(
                "living",
                vec![PrecomputedTerm::symbol("jacob")],
            )]),
        );
        assert_eq!(
            input_in_domain(&guide, &input, EvalBounds::default()),
            Ok(true)
        );
    }

    #[test]
    fn output_only_guide() {
        let guide = UserGuide::parse("output: p/1.").unwrap();
        assert!(guide.placeholders.is_empty());
        assert!(guide.inputs.is_empty());
        assert_eq!(guide.outputs, BTreeSet::from([Predicate::new("p", 1)]));
    }

    #[test]
    fn domain_checks_on_primes_guide() {
        let guide = UserGuide::parse(PRIMES_GUIDE).unwrap();
        let numerals = GuideInput::new(
            BTreeMap::from([
                ("a".to_string(), PrecomputedTerm::Numeral(10)),
                ("b".to_string(), PrecomputedTerm::Numeral(15)),
            ]),
            BTreeSet::new(),
        );
        assert_eq!(
            input_in_domain(&guide, &numerals, EvalBounds::default()),
            Ok(true)
        );

        let symbolic = GuideInput::new(
            BTreeMap::from([
                ("a".to_string(), PrecomputedTerm::symbol("c")),
                ("b".to_string(), PrecomputedTerm::Numeral(15)),
            ]),
            BTreeSet::new(),
        );
        assert_eq!(
            input_in_domain(&guide, &symbolic, EvalBounds::default()),
            Ok(false)
        );

        // Values outside the configured window still satisfy the
        // integrality assumption: the window widens to cover them.
        let large = GuideInput::new(
            BTreeMap::from([
                ("a".to_string(), PrecomputedTerm::Numeral(1000)),
                ("b".to_string(), PrecomputedTerm::Numeral(-7)),
            ]),
            BTreeSet::new(),
        );
        assert_eq!(
            input_in_domain(&guide, &large, EvalBounds::default()),
            Ok(true)
        );
    }

    #[test]
    fn guide_validation_errors() {
        assert!(matches!(
            UserGuide::parse("input: p/1.\noutput: p/1.\n"),
            Err(GuideError::InputOutputOverlap(_))
        ));
        assert!(matches!(
            UserGuide::parse("output: q/1.\nassume: forall X (q(X) -> q(X)).\n"),
            Err(GuideError::NonInputPredicate(_))
        ));
        assert!(matches!(
            UserGuide::parse("input: p/1.\nassume: p(X).\n"),
            Err(GuideError::FreeVariable(_))
        ));
        assert!(matches!(
            UserGuide::parse("spec: p.\n"),
            Err(GuideError::UnexpectedStatement(_))
        ));
    }

    #[test]
    fn input_validation() {
        let guide = UserGuide::parse(PRIMES_GUIDE).unwrap();
        let missing = GuideInput::new(BTreeMap::new(), BTreeSet::new());
        assert!(matches!(
            missing.validate(&guide),
            Err(InputError::MissingPlaceholderValue(_))
        ));
        let circular = GuideInput::new(
            BTreeMap::from([
                ("a".to_string(), PrecomputedTerm::symbol("b")),
                ("b".to_string(), PrecomputedTerm::Numeral(1)),
            ]),
            BTreeSet::new(),
        );
        assert!(matches!(
            circular.validate(&guide),
            Err(InputError::PlaceholderValue(_))
        ));
    }

    #[test]
    fn helper_files_parse_in_order() {
        let helper = HelperFile::parse(
            "lemma: forall I, J (I > 1 and J > 1 -> I < I*J).\naxiom: forall N (N >= 0 or N < 0).\nlemma: p -> p.\n",
        )
        .unwrap();
        assert_eq!(helper.statements.len(), 3);
        assert_eq!(helper.lemmas().len(), 2);
        assert_eq!(helper.axioms().len(), 1);
        assert!(matches!(helper.statements[0], HelperStatement::Lemma(_)));
        assert!(matches!(helper.statements[1], HelperStatement::Axiom(_)));
    }
}
