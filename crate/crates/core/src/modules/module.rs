use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ModuleError, Ring};
use crate::groups::GroupAction;
use crate::metric::FiniteMetricSpace;

/// Default upper bound on level coordinates.
pub const DEFAULT_LEVEL_WINDOW: u32 = 64;

/// Where the object may live in the space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "support", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Support {
    #[default]
    LocallyFinite,
    /// Every point of the object lies in `region`, a union of orbits.
    Compact { region: Vec<u32> },
}

/// Restriction on the level coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "letter", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Letter {
    /// Any level inside the window.
    #[default]
    O,
    /// Levels at most `bound`.
    T { bound: u32 },
    /// Level zero only.
    C,
}

impl Letter {
    pub fn max_level(self) -> Option<u32> {
        match self {
            Letter::O => None,
            Letter::T { bound } => Some(bound),
            Letter::C => Some(0),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decoration {
    #[serde(default)]
    pub support: Support,
    #[serde(default)]
    pub letter: Letter,
    /// Morphisms may only connect indices over the same point.
    #[serde(default)]
    pub concentrated: bool,
}

impl Decoration {
    pub fn letter(letter: Letter) -> Self {
        Self { letter, ..Self::default() }
    }

    pub fn compact(region: Vec<u32>) -> Self {
        Self {
            support: Support::Compact { region },
            ..Self::default()
        }
    }
}

/// Raw description of an index set with its group action and labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexLayout {
    /// `action[g * len + s]` is `g.s`; `None` when the group is trivial.
    pub action: Option<Vec<u32>>,
    pub points: Vec<u32>,
    pub levels: Vec<u32>,
    pub ranks: Vec<u32>,
    pub window: u32,
}

impl IndexLayout {
    /// Layout for the trivial group.
    pub fn plain(points: Vec<u32>, levels: Vec<u32>, ranks: Vec<u32>) -> Self {
        Self {
            action: None,
            points,
            levels,
            ranks,
            window: DEFAULT_LEVEL_WINDOW,
        }
    }
}

/// One free orbit `G.s` with `π(s) = (point, level)` and rank `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub point: u32,
    pub level: u32,
    pub rank: u32,
}

/// A finite geometric module `(S, π, M)`.
///
/// `S = 0..len` carries a free action of the group acting on the space;
/// `π = (point, level)` and the ranks are equivariant.
#[derive(Clone, Debug)]
pub struct GeometricModule {
    space: Arc<FiniteMetricSpace>,
    space_action: Arc<GroupAction>,
    index_action: GroupAction,
    points: Vec<u32>,
    levels: Vec<u32>,
    ranks: Vec<u32>,
    ring: Ring,
    decoration: Decoration,
    window: u32,
}

impl PartialEq for GeometricModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
            && (Arc::ptr_eq(&self.space_action, &other.space_action) || self.space_action == other.space_action)
            && self.ring == other.ring
            && self.points == other.points
            && self.levels == other.levels
            && self.ranks == other.ranks
            && self.decoration == other.decoration
            && self.window == other.window
            && self.index_action == other.index_action
    }
}

impl Eq for GeometricModule {}

impl GeometricModule {
    pub fn new(
        space: Arc<FiniteMetricSpace>,
        space_action: Arc<GroupAction>,
        layout: IndexLayout,
        ring: Ring,
        decoration: Decoration,
    ) -> Result<Self, ModuleError> {
        let IndexLayout {
            action,
            points,
            levels,
            ranks,
            window,
        } = layout;
        let len = points.len();
        if levels.len() != len || ranks.len() != len {
            return Err(ModuleError::Shape {
                expected: (len, len),
                found: (levels.len(), ranks.len()),
            });
        }
        if space_action.degree() != space.len() {
            return Err(ModuleError::InvalidAction("space action has the wrong degree".into()));
        }
        if let Ring::Mod(m) = ring {
            if m < 2 {
                return Err(ModuleError::Precondition(format!("modulus {m} must be at least 2")));
            }
        }
        let group = space_action.group().clone();
        let index_action = match action {
            None if group.order() == 1 => GroupAction::trivial(len),
            None => return Err(ModuleError::InvalidAction("missing action on indices".into())),
            Some(table) => {
                if table.len() != group.order() * len {
                    return Err(ModuleError::InvalidAction("action table has the wrong size".into()));
                }
                GroupAction::new(group.clone(), len, |g, s| table[g * len + s] as usize)
                    .map_err(|e| ModuleError::InvalidAction(e.to_string()))?
            }
        };
        for s in 0..len {
            if points[s] as usize >= space.len() {
                return Err(ModuleError::OutOfRange(points[s] as usize));
            }
            if levels[s] > window {
                return Err(ModuleError::LevelOutOfWindow {
                    level: levels[s] as u64,
                    window,
                });
            }
            for g in 1..group.order() {
                let gs = index_action.act(g, s);
                if gs == s {
                    return Err(ModuleError::NotFree { g, s });
                }
                if points[gs] as usize != space_action.act(g, points[s] as usize) {
                    return Err(ModuleError::NotEquivariant { what: "points", g, s });
                }
                if levels[gs] != levels[s] {
                    return Err(ModuleError::NotEquivariant { what: "levels", g, s });
                }
                if ranks[gs] != ranks[s] {
                    return Err(ModuleError::NotEquivariant { what: "ranks", g, s });
                }
            }
        }
        let module = Self {
            space,
            space_action,
            index_action,
            points,
            levels,
            ranks,
            ring,
            decoration,
            window,
        };
        module.check_object_decoration()?;
        Ok(module)
    }

    /// Module over the trivial group.
    pub fn plain(
        space: Arc<FiniteMetricSpace>,
        points: Vec<u32>,
        levels: Vec<u32>,
        ranks: Vec<u32>,
        ring: Ring,
    ) -> Result<Self, ModuleError> {
        let action = Arc::new(GroupAction::trivial(space.len()));
        Self::new(
            space,
            action,
            IndexLayout::plain(points, levels, ranks),
            ring,
            Decoration::default(),
        )
    }

    /// Orbit form: index `o * |G| + g` is `g` applied to the representative
    /// of orbit `o`.
    pub fn from_orbits(
        space: Arc<FiniteMetricSpace>,
        space_action: Arc<GroupAction>,
        orbits: &[OrbitSpec],
        ring: Ring,
        decoration: Decoration,
    ) -> Result<Self, ModuleError> {
        let group = space_action.group().clone();
        let n = group.order();
        let len = orbits.len() * n;
        let mut table = vec![0u32; n * len];
        let (mut points, mut levels, mut ranks) = (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
        for (o, spec) in orbits.iter().enumerate() {
            if spec.point as usize >= space.len() {
                return Err(ModuleError::OutOfRange(spec.point as usize));
            }
            for g in 0..n {
                points.push(space_action.act(g, spec.point as usize) as u32);
                levels.push(spec.level);
                ranks.push(spec.rank);
                for h in 0..n {
                    table[h * len + o * n + g] = (o * n + group.mul(h, g)) as u32;
                }
            }
        }
        let layout = IndexLayout {
            action: Some(table),
            points,
            levels,
            ranks,
            window: DEFAULT_LEVEL_WINDOW,
        };
        Self::new(space, space_action, layout, ring, decoration)
    }

    /// Same module with a different level window.
    pub fn with_window(mut self, window: u32) -> Result<Self, ModuleError> {
        if let Some(&level) = self.levels.iter().find(|&&l| l > window) {
            return Err(ModuleError::LevelOutOfWindow {
                level: level as u64,
                window,
            });
        }
        self.window = window;
        Ok(self)
    }

    /// Same module with a different decoration, checked against the objects.
    pub fn with_decoration(mut self, decoration: Decoration) -> Result<Self, ModuleError> {
        self.decoration = decoration;
        self.check_object_decoration()?;
        Ok(self)
    }

    fn check_object_decoration(&self) -> Result<(), ModuleError> {
        if let Some(bound) = self.decoration.letter.max_level() {
            if let Some(s) = self.levels.iter().position(|&l| l > bound) {
                return Err(ModuleError::Decoration {
                    s,
                    reason: format!("level {} above {bound}", self.levels[s]),
                });
            }
        }
        if let Support::Compact { region } = &self.decoration.support {
            let mut inside = vec![false; self.space.len()];
            for &x in region {
                *inside.get_mut(x as usize).ok_or(ModuleError::OutOfRange(x as usize))? = true;
            }
            for &x in region {
                for g in self.group_elements() {
                    if !inside[self.space_action.act(g, x as usize)] {
                        return Err(ModuleError::NotInvariant);
                    }
                }
            }
            if let Some(s) = self.points.iter().position(|&x| !inside[x as usize]) {
                return Err(ModuleError::Decoration {
                    s,
                    reason: "point outside the compact region".into(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn space_action(&self) -> &Arc<GroupAction> {
        &self.space_action
    }

    pub fn index_action(&self) -> &GroupAction {
        &self.index_action
    }

    pub fn group_order(&self) -> usize {
        self.space_action.group().order()
    }

    pub fn group_elements(&self) -> std::ops::Range<usize> {
        0..self.group_order()
    }

    /// `g.s`.
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.index_action.act(g, s)
    }

    pub fn point(&self, s: usize) -> usize {
        self.points[s] as usize
    }

    pub fn level(&self, s: usize) -> u32 {
        self.levels[s]
    }

    pub fn rank(&self, s: usize) -> usize {
        self.ranks[s] as usize
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn decoration(&self) -> &Decoration {
        &self.decoration
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().map(|&r| r as usize).sum()
    }

    /// Same space, group action and ring.
    pub fn same_category(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
            && (Arc::ptr_eq(&self.space_action, &other.space_action) || self.space_action == other.space_action)
            && self.ring == other.ring
    }

    /// Orbits of the index set, each sorted, ordered by minimal element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.index_action.orbits()
    }

    /// Whether the layout is the one produced by [`Self::from_orbits`].
    pub fn is_orbit_form(&self) -> bool {
        let n = self.group_order();
        if !self.len().is_multiple_of(n) {
            return false;
        }
        let group = self.space_action.group();
        (0..self.len() / n).all(|o| {
            let rep = o * n;
            (0..n).all(|g| self.act(g, rep) == o * n + g && (0..n).all(|h| self.act(h, rep + g) == rep + group.mul(h, g)))
        })
    }

    /// Submodule on a union of orbits, indexed in increasing order of
    /// `subset`. Returns the module and the new-to-old index map.
    pub fn restrict(&self, subset: &[usize], decoration: Decoration) -> Result<(Self, Vec<usize>), ModuleError> {
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_index = vec![u32::MAX; self.len()];
        for (i, &s) in keep.iter().enumerate() {
            *new_index.get_mut(s).ok_or(ModuleError::OutOfRange(s))? = i as u32;
        }
        let n = self.group_order();
        let len = keep.len();
        let mut table = vec![0u32; n * len];
        for g in 0..n {
            for (i, &s) in keep.iter().enumerate() {
                let image = new_index[self.act(g, s)];
                if image == u32::MAX {
                    return Err(ModuleError::NotInvariant);
                }
                table[g * len + i] = image;
            }
        }
        let pick = |v: &[u32]| keep.iter().map(|&s| v[s]).collect::<Vec<_>>();
        let layout = IndexLayout {
            action: (n > 1).then_some(table),
            points: pick(&self.points),
            levels: pick(&self.levels),
            ranks: pick(&self.ranks),
            window: self.window,
        };
        let module = Self::new(self.space.clone(), self.space_action.clone(), layout, self.ring, decoration)?;
        Ok((module, keep))
    }

    /// `self ⊕ other`: indices of `other` follow those of `self`.
    pub fn direct_sum(&self, other: &Self, decoration: Decoration) -> Result<Self, ModuleError> {
        if !self.same_category(other) {
            return Err(ModuleError::Incompatible);
        }
        let (a, b) = (self.len(), other.len());
        let n = self.group_order();
        let mut table = Vec::with_capacity(n * (a + b));
        for g in 0..n {
            table.extend((0..a).map(|s| self.act(g, s) as u32));
            table.extend((0..b).map(|s| (a + other.act(g, s)) as u32));
        }
        let cat = |x: &[u32], y: &[u32]| [x, y].concat();
        let layout = IndexLayout {
            action: (n > 1).then_some(table),
            points: cat(&self.points, &other.points),
            levels: cat(&self.levels, &other.levels),
            ranks: cat(&self.ranks, &other.ranks),
            window: self.window.max(other.window),
        };
        Self::new(self.space.clone(), self.space_action.clone(), layout, self.ring, decoration)
    }

    /// Same indices with levels replaced.
    pub(crate) fn with_levels(&self, levels: Vec<u32>, decoration: Decoration) -> Result<Self, ModuleError> {
        let mut out = self.clone();
        for &l in &levels {
            if l > self.window {
                return Err(ModuleError::LevelOutOfWindow {
                    level: l as u64,
                    window: self.window,
                });
            }
        }
        out.levels = levels;
        out.decoration = decoration;
        out.check_object_decoration()?;
        Ok(out)
    }

    pub fn to_record(&self) -> ModuleRecord {
        let n = self.group_order();
        ModuleRecord {
            group_order: n,
            points: self.points.clone(),
            levels: self.levels.clone(),
            ranks: self.ranks.clone(),
            action: (0..n).map(|g| (0..self.len()).map(|s| self.act(g, s) as u32).collect()).collect(),
            ring: self.ring,
            decoration: self.decoration.clone(),
            window: self.window,
        }
    }

    pub fn from_record(space: Arc<FiniteMetricSpace>, space_action: Arc<GroupAction>, record: ModuleRecord) -> Result<Self, ModuleError> {
        if record.group_order != space_action.group().order() || record.action.len() != record.group_order {
            return Err(ModuleError::InvalidAction("record group order does not match".into()));
        }
        let layout = IndexLayout {
            action: Some(record.action.concat()),
            points: record.points,
            levels: record.levels,
            ranks: record.ranks,
            window: record.window,
        };
        Self::new(space, space_action, layout, record.ring, record.decoration)
    }
}

/// Serialized form of a [`GeometricModule`]; the space is referenced only
/// through point indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleRecord {
    pub group_order: usize,
    pub points: Vec<u32>,
    pub levels: Vec<u32>,
    pub ranks: Vec<u32>,
    /// One row per group element: images of every index.
    pub action: Vec<Vec<u32>>,
    pub ring: Ring,
    pub decoration: Decoration,
    pub window: u32,
}
