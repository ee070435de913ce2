//! Discrete measures on the real line and their elementary operations.
//!
//! A measure is a finite sum of weighted Dirac deltas, stored canonically:
//! atoms sorted by strictly increasing position, all masses strictly
//! positive. [`canonicalize`] establishes the canonical form, every other
//! operation preserves it. Differences of two measures are kept in a
//! [`SignedAtomList`], the representation every distance algorithm consumes.
//!
//! Position equality during merging is exact bit equality; callers that want
//! epsilon snapping must pre-process their input.

use std::io::{self, Write};

use thiserror::Error;

/// A weighted point mass `mass · δ(position)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Location on the real line; always finite.
    pub position: f64,
    /// Weight. Strictly positive in a [`DiscreteMeasure`], any nonzero sign
    /// in a [`SignedAtomList`].
    pub mass: f64,
}

/// Errors from measure construction and parsing.
#[derive(Debug, Error)]
pub enum MeasureError {
    /// A position or mass was NaN or infinite.
    #[error("non-finite entry (position {position}, mass {mass})")]
    NonFiniteInput { position: f64, mass: f64 },
    /// A strictly negative mass was supplied for a non-negative measure.
    #[error("negative mass {mass} at position {position}")]
    NegativeMass { position: f64, mass: f64 },
    /// A line of the measure text format could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A non-negative discrete measure in canonical form.
///
/// The empty atom list is the zero measure and is legal everywhere.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    /// The zero measure.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Single point mass. Panics on non-finite input or negative mass.
    pub fn dirac(position: f64, mass: f64) -> Self {
        canonicalize(&[(position, mass)]).expect("dirac atom must be finite with mass >= 0")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total variation ‖μ‖: the sum of all masses (0 for the zero measure).
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Shift every atom by `t`. Panics if `t` is not finite.
    pub fn translate(&self, t: f64) -> Self {
        assert!(t.is_finite(), "translation offset must be finite");
        let pairs: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a.position + t, a.mass)).collect();
        canonicalize(&pairs).expect("translating a canonical measure stays canonical")
    }

    /// Multiply every mass by `lambda >= 0`; `lambda = 0` yields the zero
    /// measure. Panics on negative or non-finite `lambda`.
    pub fn scale_mass(&self, lambda: f64) -> Self {
        assert!(
            lambda.is_finite() && lambda >= 0.0,
            "mass scale factor must be finite and non-negative"
        );
        let pairs: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a.position, a.mass * lambda)).collect();
        canonicalize(&pairs).expect("scaling a canonical measure stays canonical")
    }
}

/// The canonical representation of a signed measure μ − ν: atoms sorted by
/// strictly increasing position, no zero masses (exact cancellations are
/// removed). Built by [`difference`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignedAtomList {
    atoms: Vec<Atom>,
}

impl SignedAtomList {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Sum of the signed masses, i.e. ‖μ‖ − ‖ν‖ up to rounding.
    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

/// Sort, merge and validate a raw list of `(position, mass)` pairs.
///
/// Atoms at bit-equal positions are merged by adding masses; zero-mass atoms
/// are dropped. Already-sorted input skips the sort. Fails on NaN or
/// infinite entries and on negative masses.
pub fn canonicalize(raw: &[(f64, f64)]) -> Result<DiscreteMeasure, MeasureError> {
    for &(position, mass) in raw {
        if !position.is_finite() || !mass.is_finite() {
            return Err(MeasureError::NonFiniteInput { position, mass });
        }
        if mass < 0.0 {
            return Err(MeasureError::NegativeMass { position, mass });
        }
    }
    let mut pairs = raw.to_vec();
    if !pairs.windows(2).all(|w| w[0].0 <= w[1].0) {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let mut atoms: Vec<Atom> = Vec::with_capacity(pairs.len());
    for (position, mass) in pairs {
        let position = position + 0.0; // normalize -0.0
        match atoms.last_mut() {
            Some(last) if last.position == position => last.mass += mass,
            _ => atoms.push(Atom { position, mass }),
        }
    }
    atoms.retain(|a| a.mass != 0.0);
    Ok(DiscreteMeasure { atoms })
}

/// The signed difference μ − ν merged over the union of supports.
pub fn difference(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> SignedAtomList {
    let a = mu.atoms();
    let b = nu.atoms();
    let mut atoms = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    loop {
        let atom = match (a.get(i), b.get(j)) {
            (None, None) => break,
            (Some(x), None) => {
                i += 1;
                Atom { position: x.position, mass: x.mass }
            }
            (None, Some(y)) => {
                j += 1;
                Atom { position: y.position, mass: -y.mass }
            }
            (Some(x), Some(y)) => {
                if x.position < y.position {
                    i += 1;
                    Atom { position: x.position, mass: x.mass }
                } else if y.position < x.position {
                    j += 1;
                    Atom { position: y.position, mass: -y.mass }
                } else {
                    i += 1;
                    j += 1;
                    Atom { position: x.position, mass: x.mass - y.mass }
                }
            }
        };
        if atom.mass != 0.0 {
            atoms.push(atom);
        }
    }
    SignedAtomList { atoms }
}

/// The Radon (total variation) distance: Σ |μ{x} − ν{x}| over the union of
/// supports. The pure create/annihilate transport cost.
pub fn radon_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    difference(mu, nu).atoms().iter().map(|a| a.mass.abs()).sum()
}

/// Parse the measure text format: one `<position> <mass>` pair per line,
/// whitespace-separated, `#` starts a comment line, positions in any order.
pub fn parse_measure(input: &str) -> Result<DiscreteMeasure, MeasureError> {
    let mut pairs = Vec::new();
    for (idx, raw_line) in input.lines().enumerate() {
        let line = idx + 1;
        let text = raw_line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let (Some(pos_text), Some(mass_text), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(MeasureError::Parse {
                line,
                message: format!("expected `<position> <mass>`, got {text:?}"),
            });
        };
        let position: f64 = pos_text.parse().map_err(|_| MeasureError::Parse {
            line,
            message: format!("bad position {pos_text:?}"),
        })?;
        let mass: f64 = mass_text.parse().map_err(|_| MeasureError::Parse {
            line,
            message: format!("bad mass {mass_text:?}"),
        })?;
        if !position.is_finite() || !mass.is_finite() {
            return Err(MeasureError::Parse {
                line,
                message: "positions and masses must be finite".to_string(),
            });
        }
        if mass < 0.0 {
            return Err(MeasureError::Parse {
                line,
                message: format!("negative mass {mass}"),
            });
        }
        pairs.push((position, mass));
    }
    Ok(canonicalize(&pairs).expect("entries are validated line by line"))
}

/// Write the canonical form, one atom per line, 17 significant digits.
pub fn write_measure<W: Write>(mut w: W, measure: &DiscreteMeasure) -> io::Result<()> {
    for atom in measure.atoms() {
        writeln!(w, "{:.16e} {:.16e}", atom.position, atom.mass)?;
    }
    Ok(())
}

/// [`write_measure`] into a `String`.
pub fn measure_to_string(measure: &DiscreteMeasure) -> String {
    let mut out = Vec::new();
    write_measure(&mut out, measure).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("measure text is ASCII")
}
