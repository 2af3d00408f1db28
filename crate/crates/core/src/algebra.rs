//! Exact-rational multivariate polynomials in the parameters `theta`.
//!
//! A total choice `t` that entails several stable models leaves open how its
//! weight is split among them. Each such pair gets a parameter
//! `theta{s|t}`, and the parameters of one choice sum to one. Polynomials are
//! canonical: no zero coefficients, monomials ordered by degree and then by
//! variable, so structural equality is polynomial equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::event::Event;

/// The parameter `theta{model|choice}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaVar {
    pub model: Event,
    pub choice: Event,
}

impl ThetaVar {
    pub fn new(model: Event, choice: Event) -> Self {
        ThetaVar { model, choice }
    }
}

/// Grouped by choice, then by model.
impl Ord for ThetaVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.choice, self.model).cmp(&(other.choice, other.model))
    }
}

impl PartialOrd for ThetaVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Names parameters for display and error messages.
pub type VarNamer<'a> = &'a dyn Fn(&ThetaVar) -> String;

fn debug_name(var: &ThetaVar) -> String {
    format!("theta{{{:?}|{:?}}}", var.model, var.choice)
}

/// A product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(ThetaVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(var: ThetaVar) -> Self {
        Monomial(vec![(var, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(ThetaVar, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors: BTreeMap<ThetaVar, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *factors.entry(v).or_default() += e;
        }
        Monomial(factors.into_iter().collect())
    }

    fn exponent_of(&self, var: &ThetaVar) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    fn without(&self, var: &ThetaVar) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(v, _)| v != var).collect())
    }

    fn render(&self, names: VarNamer) -> String {
        self.0
            .iter()
            .map(|(v, e)| match e {
                1 => names(v),
                _ => format!("{}^{e}", names(v)),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(value: BigRational) -> Self {
        let mut poly = Poly::zero();
        poly.add_term(Monomial::one(), value);
        poly
    }

    pub fn var(var: ThetaVar) -> Self {
        let mut poly = Poly::zero();
        poly.add_term(Monomial::var(var), BigRational::one());
        poly
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut poly = Poly::zero();
        for (m, c) in terms {
            poly.add_term(m, c);
        }
        poly
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial).or_insert_with(BigRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<ThetaVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn scale(&self, factor: &BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * factor)))
    }

    fn pow(&self, exponent: u32) -> Poly {
        (0..exponent).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Replaces every occurrence of `var` by `value`.
    pub fn substitute(&self, var: &ThetaVar, value: &Poly) -> Poly {
        let mut result = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(var);
            let rest = Poly::from_terms([(m.without(var), c.clone())]);
            result += if e == 0 { rest } else { &rest * &value.pow(e) };
        }
        result
    }

    /// Evaluates with `lookup`; reports the first variable it cannot resolve.
    pub fn eval_with(
        &self,
        lookup: impl Fn(&ThetaVar) -> Option<BigRational>,
    ) -> std::result::Result<BigRational, ThetaVar> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in &m.0 {
                let value = lookup(v).ok_or(*v)?;
                for _ in 0..*e {
                    term *= &value;
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval(&self, theta: &ThetaAssignment) -> Result<BigRational> {
        self.eval_with(|v| theta.get(v).cloned())
            .map_err(|v| Error::MissingVariable(debug_name(&v)))
    }

    /// Terms sorted by degree, coefficients as `p/q`: `7/10 + 3/10*theta{ab|a}`.
    pub fn render(&self, names: VarNamer) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if m.is_one() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{magnitude}*{}", m.render(names)));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&debug_name))
    }
}

impl From<BigRational> for Poly {
    fn from(value: BigRational) -> Self {
        Poly::constant(value)
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut sum = self.clone();
        sum += rhs;
        sum
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut product = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                product.add_term(m1.mul(m2), c1 * c2);
            }
        }
        product
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

pub fn poly_add(p: &Poly, q: &Poly) -> Poly {
    p + q
}

pub fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    p * q
}

/// A quotient of polynomials, scaled so the denominator's first term has
/// coefficient one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// `None` when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        let lead = den.terms.values().next()?.clone();
        if num.is_zero() {
            return Some(RationalFn::from(Poly::zero()));
        }
        let inverse = BigRational::one() / lead;
        Some(RationalFn {
            num: num.scale(&inverse),
            den: den.scale(&inverse),
        })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    /// Equality as functions: `a/b = c/d` iff `a*d = c*b`.
    pub fn equivalent(&self, other: &RationalFn) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval(&self, theta: &ThetaAssignment) -> Result<BigRational> {
        let den = self.den.eval(theta)?;
        if den.is_zero() {
            return Err(Error::ZeroNormalizerAt);
        }
        Ok(self.num.eval(theta)? / den)
    }

    pub fn render(&self, names: VarNamer) -> String {
        if self.den == Poly::one() {
            return self.num.render(names);
        }
        let wrap = |p: &Poly| {
            let text = p.render(names);
            if p.len() > 1 {
                format!("({text})")
            } else {
                text
            }
        };
        format!("{} / {}", wrap(&self.num), wrap(&self.den))
    }
}

impl From<Poly> for RationalFn {
    fn from(num: Poly) -> Self {
        RationalFn {
            num,
            den: Poly::one(),
        }
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;

    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFn::new(num, &self.den * &rhs.den).expect("product of nonzero polynomials")
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&debug_name))
    }
}

/// The parameters of one total choice; they sum to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGroup {
    pub choice: Event,
    /// Ordered by model; the last one is eliminated.
    pub vars: Vec<ThetaVar>,
}

impl ConstraintGroup {
    pub fn dependent(&self) -> ThetaVar {
        *self
            .vars
            .last()
            .expect("groups have at least two variables")
    }

    pub fn free(&self) -> &[ThetaVar] {
        &self.vars[..self.vars.len() - 1]
    }

    /// `1 - (sum of the free variables)`.
    pub fn completion(&self) -> Poly {
        self.free()
            .iter()
            .fold(Poly::one(), |acc, &v| &acc - &Poly::var(v))
    }
}

/// One simplex constraint per total choice entailing two or more models.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    groups: Vec<ConstraintGroup>,
}

impl ConstraintSet {
    pub fn new(groups: Vec<ConstraintGroup>) -> Self {
        debug_assert!(groups.iter().all(|g| g.vars.len() >= 2));
        ConstraintSet { groups }
    }

    pub fn groups(&self) -> &[ConstraintGroup] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = ThetaVar> + '_ {
        self.groups.iter().flat_map(|g| g.vars.iter().copied())
    }

    pub fn free_vars(&self) -> impl Iterator<Item = ThetaVar> + '_ {
        self.groups.iter().flat_map(|g| g.free().iter().copied())
    }

    pub fn group_of(&self, var: &ThetaVar) -> Option<&ConstraintGroup> {
        self.groups.iter().find(|g| g.vars.contains(var))
    }

    /// Substitutes each group's last variable by one minus the others.
    pub fn eliminate(&self, poly: &Poly) -> Poly {
        self.groups.iter().fold(poly.clone(), |p, g| {
            p.substitute(&g.dependent(), &g.completion())
        })
    }
}

pub fn eliminate(poly: &Poly, constraints: &ConstraintSet) -> Poly {
    constraints.eliminate(poly)
}

/// Values for every parameter, each group summing to exactly one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaAssignment {
    values: BTreeMap<ThetaVar, BigRational>,
}

impl ThetaAssignment {
    /// Validates `values` against `constraints`. A group's last variable may
    /// be omitted, in which case it is completed to make the group sum to one.
    pub fn new(
        mut values: BTreeMap<ThetaVar, BigRational>,
        constraints: &ConstraintSet,
        names: VarNamer,
    ) -> Result<Self> {
        if let Some(unknown) = values.keys().find(|v| constraints.group_of(v).is_none()) {
            return Err(Error::UnknownParameter(names(unknown)));
        }
        for group in constraints.groups() {
            for var in group.free() {
                if !values.contains_key(var) {
                    return Err(Error::MissingVariable(names(var)));
                }
            }
            let dependent = group.dependent();
            if !values.contains_key(&dependent) {
                let rest: BigRational = group.free().iter().map(|v| &values[v]).sum();
                values.insert(dependent, BigRational::one() - rest);
            }
            for var in &group.vars {
                let value = &values[var];
                if value.is_negative() || *value > BigRational::one() {
                    return Err(Error::ParameterOutOfRange {
                        name: names(var),
                        value: value.to_string(),
                    });
                }
            }
            let sum: BigRational = group.vars.iter().map(|v| &values[v]).sum();
            if !sum.is_one() {
                return Err(Error::SimplexViolation {
                    group: group.vars.iter().map(names).collect::<Vec<_>>().join(" + "),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(ThetaAssignment { values })
    }

    /// Every group split evenly.
    pub fn uniform(constraints: &ConstraintSet) -> Self {
        let values = constraints
            .groups()
            .iter()
            .flat_map(|g| {
                let share = BigRational::new(1.into(), (g.vars.len() as i64).into());
                g.vars.iter().map(move |&v| (v, share.clone()))
            })
            .collect();
        ThetaAssignment { values }
    }

    pub fn get(&self, var: &ThetaVar) -> Option<&BigRational> {
        self.values.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ThetaVar, &BigRational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn from_validated(values: BTreeMap<ThetaVar, BigRational>) -> Self {
        ThetaAssignment { values }
    }
}
