use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::atom::Atom;
use super::features::FeatureFn;
use crate::dsp::FeatureCube;
use crate::error::{Error, Result};
use crate::logic::{interval_count, Interval, IntervalModel};

/// Propositional instances only know the full interval; modal instances
/// know every interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Propositional,
    Modal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Propositional => "prop",
            Mode::Modal => "modal",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop" | "propositional" => Ok(Mode::Propositional),
            "modal" => Ok(Mode::Modal),
            _ => Err(Error::invalid(format!("unknown mode {s:?} (expected prop or modal)"))),
        }
    }
}

/// One labelled series with every feature value precomputed.
///
/// The table is laid out `[function][attribute][world]`, with worlds in
/// lexicographic interval order (a single world, the full interval, in
/// propositional mode).
#[derive(Debug, Clone, PartialEq)]
pub struct LogisetInstance {
    cube: FeatureCube,
    label: usize,
    mode: Mode,
    n_worlds: usize,
    table: Vec<f64>,
}

impl LogisetInstance {
    pub fn new(cube: FeatureCube, label: usize, mode: Mode) -> Self {
        let len = cube.len();
        let n_attr = cube.n_attributes();
        let worlds: Vec<Interval> = match mode {
            Mode::Modal => (0..interval_count(len))
                .map(|i| Interval::from_index(i, len))
                .collect(),
            Mode::Propositional => vec![Interval::full(len)],
        };
        let mut table = Vec::with_capacity(FeatureFn::ALL.len() * n_attr * worlds.len());
        for f in FeatureFn::ALL {
            for a in 0..n_attr {
                let s = cube.series(a);
                table.extend(worlds.iter().map(|w| f.apply(&s[w.x..w.y])));
            }
        }
        Self {
            n_worlds: worlds.len(),
            cube,
            label,
            mode,
            table,
        }
    }

    pub fn cube(&self) -> &FeatureCube {
        &self.cube
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// Feature values of `(func, attr)` for every world, in world order.
    pub fn column(&self, func: FeatureFn, attr: usize) -> &[f64] {
        let start = (func as usize * self.cube.n_attributes() + attr) * self.n_worlds;
        &self.table[start..start + self.n_worlds]
    }

    /// Table index of `w`, if this instance stores it.
    pub fn world_index(&self, w: Interval) -> Option<usize> {
        let len = self.cube.len();
        if !w.fits(len) {
            return None;
        }
        match self.mode {
            Mode::Modal => Some(w.index(len)),
            Mode::Propositional => (w == Interval::full(len)).then_some(0),
        }
    }

    pub fn value(&self, func: FeatureFn, attr: usize, w: Interval) -> Result<f64> {
        if attr >= self.cube.n_attributes() {
            return Err(Error::UnresolvableAtom(format!("attribute index {attr}")));
        }
        let world = self.world_index(w).ok_or_else(|| {
            Error::invalid(format!("interval {w} absent from {} feature table", self.mode))
        })?;
        Ok(self.column(func, attr)[world])
    }

    pub fn atom_eval(&self, atom: &Atom, w: Interval) -> Result<bool> {
        Ok(atom.holds(self.value(atom.func, atom.attr, w)?))
    }
}

impl IntervalModel for LogisetInstance {
    fn series_len(&self) -> usize {
        self.cube.len()
    }

    fn eval_atom(&self, atom: &Atom, w: Interval) -> Result<bool> {
        self.atom_eval(atom, w)
    }
}

/// A labelled collection of series sharing one attribute schema and length.
#[derive(Debug, Clone, PartialEq)]
pub struct Logiset {
    instances: Vec<LogisetInstance>,
    classes: Vec<String>,
    attributes: Vec<String>,
    series_len: usize,
    mode: Mode,
}

impl Logiset {
    /// Builds from cubes with class indices into `classes`.
    pub fn build(items: Vec<(FeatureCube, usize)>, classes: Vec<String>, mode: Mode) -> Result<Self> {
        let Some((first, _)) = items.first() else {
            return Err(Error::EmptyDataset);
        };
        let attributes = first.names().to_vec();
        let series_len = first.len();
        for (i, (cube, label)) in items.iter().enumerate() {
            if cube.names() != attributes.as_slice() {
                return Err(Error::SchemaMismatch(format!("instance {i} has a different attribute set")));
            }
            if cube.len() != series_len {
                return Err(Error::SchemaMismatch(format!(
                    "instance {i} has {} points, expected {series_len}",
                    cube.len()
                )));
            }
            if *label >= classes.len() {
                return Err(Error::UnknownLabel(format!("class index {label}")));
            }
        }
        let instances = crate::par::map_slice(&items, |(cube, label)| {
            LogisetInstance::new(cube.clone(), *label, mode)
        });
        Ok(Self {
            instances,
            classes,
            attributes,
            series_len,
            mode,
        })
    }

    /// Builds from cubes with class names, resolved against `classes`.
    pub fn from_named<S: AsRef<str>>(
        items: Vec<(FeatureCube, S)>,
        classes: Vec<String>,
        mode: Mode,
    ) -> Result<Self> {
        let mut resolved = Vec::with_capacity(items.len());
        for (cube, name) in items {
            let name = name.as_ref();
            let id = classes
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            resolved.push((cube, id));
        }
        Self::build(resolved, classes, mode)
    }

    pub fn instances(&self) -> &[LogisetInstance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &LogisetInstance {
        &self.instances[i]
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn labels(&self) -> Vec<usize> {
        self.instances.iter().map(|i| i.label).collect()
    }

    /// Instance indices grouped by class.
    pub fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes.len()];
        for (i, inst) in self.instances.iter().enumerate() {
            out[inst.label].push(i);
        }
        out
    }

    /// The instances at `indices`, in that order, sharing this schema.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let instances = indices
            .iter()
            .map(|&i| {
                self.instances
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("instance index {i} out of range")))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            instances,
            classes: self.classes.clone(),
            attributes: self.attributes.clone(),
            series_len: self.series_len,
            mode: self.mode,
        })
    }

    /// Checks that a cube matches this logiset's schema.
    pub fn check_schema(&self, cube: &FeatureCube) -> Result<()> {
        if cube.names() != self.attributes.as_slice() || cube.len() != self.series_len {
            return Err(Error::SchemaMismatch(
                "cube attributes or length differ from the dataset".into(),
            ));
        }
        Ok(())
    }
}
