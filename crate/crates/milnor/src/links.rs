//! Link presentations by longitudes, their homotopy invariants, and the
//! cabling and band-sum moves used to build and untie them.
//!
//! A link on `n` components is recorded by its longitude words `w₁ … wₙ`
//! in the meridian generators `x₁ … xₙ`; the word `wᵢ` never uses its own
//! meridian `xᵢ`. Coefficients of the reduced expansion of `wⱼ` are the
//! link-homotopy invariants `mu(i₁…i_k; j)`; the link is homotopically
//! trivial exactly when all of them vanish.
//!
//! [`LinkPresentation::bing_double`] and [`LinkPresentation::ramify`]
//! generate the generalized Borromean family from the Hopf link (see
//! [`build_gbr`]), and [`stabilize_and_trivialize`] unties such a link by
//! band-summing each longitude with the inverses of its certificate
//! terms.
//!
//! ```
//! use milnor::links::LinkPresentation;
//! let rings = LinkPresentation::hopf().bing_double(1).unwrap();
//! assert_eq!(rings.components(), 3);
//! assert!(rings.homotopically_trivial().unwrap().is_some());
//! ```

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::engel::{engel_decompose, EngelCertificate, EngelError};
use crate::magnus::{expand_reduced, MagnusError, Monomial, ReducedSeries};
use crate::milnor::MilnorContext;
use crate::parse::parse_word;
use crate::words::{Gen, Word};

/// Errors from link construction, invariants, and moves.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinkError {
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Engel(#[from] EngelError),
    #[error("a link needs at least one component")]
    NoComponents,
    #[error("expected {expected} longitudes, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("longitude {component} uses its own meridian x{component}")]
    OwnMeridian { component: u32 },
    #[error("longitude {component} uses meridian x{index}, beyond the {n} components")]
    MeridianOutOfRange { component: u32, index: u32, n: u32 },
    #[error("component index {index} out of range 1..={n}")]
    ComponentOutOfRange { index: u32, n: u32 },
    #[error("ramification count must be at least 1, got {0}")]
    RamifyCount(u32),
    #[error("band sign must be +1 or -1, got {0}")]
    BadBandSign(i8),
    #[error("band insert for component {component} uses its own meridian x{component}")]
    BandUsesOwnMeridian { component: u32 },
    #[error("sources must be non-empty")]
    EmptySources,
    #[error("longitudes must lie in the fourth lower-central term: witness {witness}")]
    EssentialLowDegree { witness: String },
    #[error("stabilized link is still essential: witness {witness}")]
    StabilizationFailed { witness: String },
    #[error("link file parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A non-vanishing invariant, the proof that a link is essential.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuWitness {
    pub sources: Vec<u32>,
    pub target: u32,
    pub value: BigInt,
}

pub(crate) fn index_label(indices: &[u32]) -> String {
    if indices.iter().all(|&i| i <= 9) {
        indices.iter().map(|i| i.to_string()).collect()
    } else {
        indices.iter().map(|i| i.to_string()).join(",")
    }
}

impl fmt::Display for MuWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mu({};{})={}",
            index_label(&self.sources),
            self.target,
            self.value
        )
    }
}

/// One invariant value together with its integrity flag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuBar {
    /// Coefficient of the source monomial in the target longitude.
    pub value: BigInt,
    /// True iff every shorter invariant of the same cyclic tuple vanishes,
    /// so the value carries no indeterminacy.
    pub well_defined: bool,
}

/// A link given by one longitude word per component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkPresentation {
    n: u32,
    names: Vec<String>,
    longitudes: Vec<Word>,
}

impl LinkPresentation {
    /// Builds a presentation with default component names `1 … n`.
    pub fn new(n: u32, longitudes: Vec<Word>) -> Result<LinkPresentation, LinkError> {
        let names = (1..=n).map(|i| i.to_string()).collect();
        LinkPresentation::with_names(n, names, longitudes)
    }

    /// Builds a presentation with explicit component names.
    pub fn with_names(
        n: u32,
        names: Vec<String>,
        longitudes: Vec<Word>,
    ) -> Result<LinkPresentation, LinkError> {
        if n == 0 {
            return Err(LinkError::NoComponents);
        }
        if longitudes.len() != n as usize {
            return Err(LinkError::WrongCount {
                expected: n as usize,
                got: longitudes.len(),
            });
        }
        if names.len() != n as usize {
            return Err(LinkError::WrongCount {
                expected: n as usize,
                got: names.len(),
            });
        }
        for (k, w) in longitudes.iter().enumerate() {
            let component = (k + 1) as u32;
            for g in w.support() {
                if g.index() == component {
                    return Err(LinkError::OwnMeridian { component });
                }
                if g.index() > n {
                    return Err(LinkError::MeridianOutOfRange {
                        component,
                        index: g.index(),
                        n,
                    });
                }
            }
        }
        Ok(LinkPresentation {
            n,
            names,
            longitudes,
        })
    }

    /// The two-component Hopf link: each longitude is the other meridian.
    pub fn hopf() -> LinkPresentation {
        LinkPresentation::new(2, vec![Word::gen(2), Word::gen(1)])
            .expect("the Hopf presentation is well-formed")
    }

    pub fn components(&self) -> u32 {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Longitude of component `i` (1-based).
    ///
    /// # Panics
    ///
    /// Panics if `i` is out of range; use [`LinkError::ComponentOutOfRange`]
    /// paths for untrusted indices.
    pub fn longitude(&self, i: u32) -> &Word {
        &self.longitudes[(i - 1) as usize]
    }

    pub fn longitudes(&self) -> &[Word] {
        &self.longitudes
    }

    /// The Milnor group context on this link's meridians.
    pub fn milnor_context(&self) -> MilnorContext {
        MilnorContext::new(self.n)
    }

    fn check_component(&self, i: u32) -> Result<(), LinkError> {
        if i < 1 || i > self.n {
            return Err(LinkError::ComponentOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Replaces component `i` by an untwisted Bing double.
    ///
    /// The two new components take indices `i` and `i+1`; higher indices
    /// shift up by one. Every old longitude is rewritten under the
    /// meridian substitution `xᵢ ↦ [xᵢ, xᵢ₊₁]`, and the new pair clasps
    /// the old core: their longitudes are `[xᵢ₊₁, w]` and `[xᵢ, w]` where
    /// `w` is the rewritten old longitude.
    pub fn bing_double(&self, i: u32) -> Result<LinkPresentation, LinkError> {
        self.check_component(i)?;
        let mut images = BTreeMap::new();
        for j in 1..=self.n {
            let img = match j.cmp(&i) {
                std::cmp::Ordering::Less => Word::gen(j),
                std::cmp::Ordering::Equal => {
                    Word::commutator(&Word::gen(i), &Word::gen(i + 1))
                }
                std::cmp::Ordering::Greater => Word::gen(j + 1),
            };
            images.insert(Gen::new(j), img);
        }
        let rewrite = |w: &Word| w.substitute(&images).expect("all meridians have images");
        let mut longitudes = Vec::with_capacity((self.n + 1) as usize);
        for j in 1..=self.n {
            let w = rewrite(self.longitude(j));
            if j == i {
                longitudes.push(Word::commutator(&Word::gen(i + 1), &w));
                longitudes.push(Word::commutator(&Word::gen(i), &w));
            } else {
                longitudes.push(w);
            }
        }
        LinkPresentation::new(self.n + 1, longitudes)
    }

    /// Replaces component `i` by `r` parallel copies.
    ///
    /// The copies take indices `i … i+r-1` and share the rewritten old
    /// longitude; the substitution sends `xᵢ` to the product of the copy
    /// meridians. `r = 1` returns the link unchanged.
    pub fn ramify(&self, i: u32, r: u32) -> Result<LinkPresentation, LinkError> {
        self.check_component(i)?;
        if r < 1 {
            return Err(LinkError::RamifyCount(r));
        }
        let mut images = BTreeMap::new();
        for j in 1..=self.n {
            let img = match j.cmp(&i) {
                std::cmp::Ordering::Less => Word::gen(j),
                std::cmp::Ordering::Equal => {
                    let mut p = Word::identity();
                    for copy in 0..r {
                        p = p.mul(&Word::gen(i + copy));
                    }
                    p
                }
                std::cmp::Ordering::Greater => Word::gen(j + r - 1),
            };
            images.insert(Gen::new(j), img);
        }
        let rewrite = |w: &Word| w.substitute(&images).expect("all meridians have images");
        let mut longitudes = Vec::with_capacity((self.n + r - 1) as usize);
        for j in 1..=self.n {
            let w = rewrite(self.longitude(j));
            if j == i {
                for _ in 0..r {
                    longitudes.push(w.clone());
                }
            } else {
                longitudes.push(w);
            }
        }
        LinkPresentation::new(self.n + r - 1, longitudes)
    }

    /// Band-sums component `i` with a parallel copy of the curve `insert`,
    /// multiplying `wᵢ` by `insert^sign` on the right.
    ///
    /// The insert must be a curve in the complement of component `i`, so
    /// its word may not use `xᵢ`.
    pub fn band_sum(&self, i: u32, insert: &Word, sign: i8) -> Result<LinkPresentation, LinkError> {
        self.check_component(i)?;
        if sign != 1 && sign != -1 {
            return Err(LinkError::BadBandSign(sign));
        }
        for g in insert.support() {
            if g.index() == i {
                return Err(LinkError::BandUsesOwnMeridian { component: i });
            }
            if g.index() > self.n {
                return Err(LinkError::MeridianOutOfRange {
                    component: i,
                    index: g.index(),
                    n: self.n,
                });
            }
        }
        let mut longitudes = self.longitudes.clone();
        let idx = (i - 1) as usize;
        longitudes[idx] = longitudes[idx].mul(&insert.pow(sign as i64));
        LinkPresentation::with_names(self.n, self.names.clone(), longitudes)
    }

    fn expansions(&self) -> Result<Vec<ReducedSeries>, MagnusError> {
        self.longitudes
            .iter()
            .map(|w| expand_reduced(w, self.n))
            .collect()
    }

    /// The invariant `mu(sources; target)` with its integrity flag.
    ///
    /// The value is the coefficient of the source monomial in the reduced
    /// expansion of the target longitude. The flag checks all shorter
    /// invariants of the cyclic tuple `(sources…, target)`: every subset
    /// of 2 to `k` positions, read cyclically from each choice of target
    /// position, must give value zero.
    pub fn mu_bar(&self, sources: &[u32], target: u32) -> Result<MuBar, LinkError> {
        if sources.is_empty() {
            return Err(LinkError::EmptySources);
        }
        self.check_component(target)?;
        for &s in sources {
            self.check_component(s)?;
        }
        let expansions = self.expansions()?;
        let value =
            expansions[(target - 1) as usize].coefficient(&Monomial::from_indices(sources));

        let mut tuple = sources.to_vec();
        tuple.push(target);
        let len = tuple.len();
        let mut well_defined = true;
        'subsets: for size in 2..len {
            for positions in (0..len).combinations(size) {
                for &t in &positions {
                    let mut srcs = Vec::with_capacity(size - 1);
                    for step in 1..len {
                        let p = (t + step) % len;
                        if positions.contains(&p) {
                            srcs.push(tuple[p]);
                        }
                    }
                    let sub = expansions[(tuple[t] - 1) as usize]
                        .coefficient(&Monomial::from_indices(srcs));
                    if !sub.is_zero() {
                        well_defined = false;
                        break 'subsets;
                    }
                }
            }
        }
        Ok(MuBar {
            value,
            well_defined,
        })
    }

    /// Scans for a non-vanishing invariant; `None` means the link is
    /// homotopically trivial.
    ///
    /// The scan runs by source length, then target, then sources in
    /// lexicographic order, so the returned witness is the first
    /// non-vanishing invariant in that order. Since every monomial of a
    /// reduced longitude expansion has distinct indices avoiding its own
    /// component, the scan is exhaustive: it finds a witness exactly when
    /// some longitude is non-trivial in the Milnor group.
    pub fn homotopically_trivial(&self) -> Result<Option<MuWitness>, LinkError> {
        let expansions = self.expansions()?;
        for k in 1..self.n {
            for target in 1..=self.n {
                let others: Vec<u32> = (1..=self.n).filter(|&j| j != target).collect();
                for sources in others.into_iter().permutations(k as usize) {
                    let value = expansions[(target - 1) as usize]
                        .coefficient(&Monomial::from_indices(sources.clone()));
                    if !value.is_zero() {
                        return Ok(Some(MuWitness {
                            sources,
                            target,
                            value,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// One more than the smallest lower-central degree among the
    /// longitudes; a homotopically trivial link reports `n + 1`.
    pub fn filtration_level(&self) -> Result<u32, LinkError> {
        let ctx = self.milnor_context();
        let mut min: Option<usize> = None;
        for w in &self.longitudes {
            if let Some(d) = ctx.lcs_degree(w)? {
                min = Some(min.map_or(d, |m| m.min(d)));
            }
        }
        Ok(match min {
            Some(d) => (d + 1) as u32,
            None => self.n + 1,
        })
    }
}

/// Renders a link in the `n = …` / `component name = word` file format.
pub fn render_link(link: &LinkPresentation) -> String {
    let mut out = format!("n = {}\n", link.components());
    for (k, w) in link.longitudes().iter().enumerate() {
        if w.is_identity() {
            out.push_str(&format!("component {} =\n", link.names()[k]));
        } else {
            out.push_str(&format!("component {} = {}\n", link.names()[k], w));
        }
    }
    out
}

/// Parses the link file format.
///
/// The file holds one `n = <count>` line and one `component <name> = <word>`
/// line per component, in component order; an empty word is the identity
/// longitude. Blank lines and `#` comments are skipped.
pub fn parse_link(text: &str) -> Result<LinkPresentation, LinkError> {
    let fail = |line: usize, message: String| LinkError::Parse { line, message };
    let mut n: Option<u32> = None;
    let mut names = Vec::new();
    let mut longitudes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("component") {
            let (name, word_text) = rest
                .split_once('=')
                .ok_or_else(|| fail(line_no, "expected 'component <name> = <word>'".into()))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(fail(line_no, "component name is empty".into()));
            }
            let word_text = word_text.trim();
            let word = if word_text.is_empty() {
                Word::identity()
            } else {
                parse_word(word_text).map_err(|e| fail(line_no, e.to_string()))?
            };
            names.push(name.to_string());
            longitudes.push(word);
        } else if let Some(rest) = line.strip_prefix('n') {
            let value = rest
                .trim_start()
                .strip_prefix('=')
                .ok_or_else(|| fail(line_no, "expected 'n = <count>'".into()))?;
            let count: u32 = value
                .trim()
                .parse()
                .map_err(|_| fail(line_no, "component count is not a number".into()))?;
            n = Some(count);
        } else {
            return Err(fail(line_no, format!("unrecognized line: {line}")));
        }
    }
    let n = n.ok_or_else(|| fail(0, "missing 'n = <count>' line".into()))?;
    LinkPresentation::with_names(n, names, longitudes)
}

/// A cabling tree: a leaf keeps a component (with a parallel-copy count),
/// a node Bing-doubles it and cables the two new components further.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GbrTree {
    Leaf { mult: u32 },
    Node(Box<GbrTree>, Box<GbrTree>),
}

impl GbrTree {
    /// Number of link components the tree produces.
    pub fn width(&self) -> u32 {
        match self {
            GbrTree::Leaf { mult } => *mult,
            GbrTree::Node(l, r) => l.width() + r.width(),
        }
    }
}

impl fmt::Display for GbrTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GbrTree::Leaf { mult } => write!(f, "{mult}"),
            GbrTree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// A generalized Borromean link: the Hopf link with each component cabled
/// by a tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GbrSpec {
    pub first: GbrTree,
    pub second: GbrTree,
}

fn tokenize_tree(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut digits = String::new();
    for c in text.chars() {
        if c.is_ascii_digit() {
            digits.push(c);
            continue;
        }
        if !digits.is_empty() {
            tokens.push(std::mem::take(&mut digits));
        }
        match c {
            '(' | ')' => tokens.push(c.to_string()),
            c if c.is_whitespace() => {}
            other => tokens.push(other.to_string()),
        }
    }
    if !digits.is_empty() {
        tokens.push(digits);
    }
    tokens
}

fn parse_tree_at(tokens: &[String], pos: &mut usize) -> Result<GbrTree, LinkError> {
    let fail = |message: String| LinkError::Parse { line: 1, message };
    let token = tokens
        .get(*pos)
        .ok_or_else(|| fail("unexpected end of tree".into()))?;
    *pos += 1;
    if token == "(" {
        let left = parse_tree_at(tokens, pos)?;
        let right = parse_tree_at(tokens, pos)?;
        match tokens.get(*pos) {
            Some(t) if t == ")" => {
                *pos += 1;
                Ok(GbrTree::Node(Box::new(left), Box::new(right)))
            }
            _ => Err(fail("expected ')' closing a tree node".into())),
        }
    } else if let Ok(mult) = token.parse::<u32>() {
        if mult < 1 {
            return Err(fail("leaf multiplicity must be at least 1".into()));
        }
        Ok(GbrTree::Leaf { mult })
    } else {
        Err(fail(format!("unexpected token '{token}' in tree")))
    }
}

/// Parses one cabling tree, e.g. `1`, `(1 1)`, or `((1 2) 1)`.
pub fn parse_tree(text: &str) -> Result<GbrTree, LinkError> {
    let tokens = tokenize_tree(text);
    let mut pos = 0;
    let tree = parse_tree_at(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(LinkError::Parse {
            line: 1,
            message: format!("trailing input after tree: '{}'", tokens[pos..].join(" ")),
        });
    }
    Ok(tree)
}

fn expand_tree(
    link: LinkPresentation,
    tree: &GbrTree,
    pos: u32,
) -> Result<LinkPresentation, LinkError> {
    match tree {
        GbrTree::Leaf { mult } => {
            if *mult == 1 {
                Ok(link)
            } else {
                link.ramify(pos, *mult)
            }
        }
        GbrTree::Node(l, r) => {
            let doubled = link.bing_double(pos)?;
            let left_done = expand_tree(doubled, l, pos)?;
            expand_tree(left_done, r, pos + l.width())
        }
    }
}

/// Builds the generalized Borromean link of a cabling specification.
pub fn build_gbr(spec: &GbrSpec) -> Result<LinkPresentation, LinkError> {
    let link = expand_tree(LinkPresentation::hopf(), &spec.first, 1)?;
    expand_tree(link, &spec.second, 1 + spec.first.width())
}

/// One certificate in a stabilization plan, tied to its component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentCertificate {
    pub component: u32,
    /// Lower-central degree of the component's longitude.
    pub degree: usize,
    pub certificate: EngelCertificate,
}

/// One band-sum instruction: multiply the component's longitude by
/// `insert^sign`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BandMove {
    pub component: u32,
    pub insert: Word,
    pub sign: i8,
}

/// The output of [`stabilize_and_trivialize`]: certificates, the band
/// moves realizing their inverses, and the resulting trivial link.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizationPlan {
    pub certificates: Vec<ComponentCertificate>,
    pub moves: Vec<BandMove>,
    pub result: LinkPresentation,
}

/// Unties a link whose longitudes all lie in the fourth lower-central
/// term by band-summing away elementary commutators.
///
/// Each component with a non-trivial longitude gets a certificate for
/// that longitude; the band moves append the inverses of its terms in
/// reverse order, so the new longitude is trivial in the Milnor group.
/// Components are processed by descending longitude degree, ties by
/// ascending index. The pre-condition is checked first: a longitude of
/// degree below 4 aborts with its non-vanishing invariant as witness,
/// and the assembled result is re-checked to be homotopically trivial.
pub fn stabilize_and_trivialize(link: &LinkPresentation) -> Result<StabilizationPlan, LinkError> {
    let ctx = link.milnor_context();
    let mut pending: Vec<(u32, usize)> = Vec::new();
    for j in 1..=link.components() {
        let expansion = ctx.expand(link.longitude(j))?;
        if let Some(d) = expansion.lowest_degree() {
            if d < 4 {
                let (mono, value) = expansion
                    .degree_part(d)
                    .next()
                    .expect("lowest_degree found a term");
                let witness = MuWitness {
                    sources: mono.indices().to_vec(),
                    target: j,
                    value: value.clone(),
                };
                return Err(LinkError::EssentialLowDegree {
                    witness: witness.to_string(),
                });
            }
            pending.push((j, d));
        }
    }
    pending.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut certificates = Vec::new();
    let mut moves = Vec::new();
    let mut result = link.clone();
    for (component, degree) in pending {
        let certificate = engel_decompose(link.longitude(component), &ctx)?;
        for term in certificate.terms().iter().rev() {
            let insert = Word::left_normed(term.entries()).expect("terms have 4+ entries");
            let sign = -term.exponent();
            result = result.band_sum(component, &insert, sign)?;
            moves.push(BandMove {
                component,
                insert,
                sign,
            });
        }
        certificates.push(ComponentCertificate {
            component,
            degree,
            certificate,
        });
    }

    if let Some(witness) = result.homotopically_trivial()? {
        return Err(LinkError::StabilizationFailed {
            witness: witness.to_string(),
        });
    }
    Ok(StabilizationPlan {
        certificates,
        moves,
        result,
    })
}
