use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novikov::{Coefficient, Series, Valuation};
use crate::rational::{format_q, serde_q, Q};

/// Dense coefficient vector over the basis, every entry known mod `q^E`.
pub type Element<C> = Vec<Series<C>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// Integer lift of the degree.
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coefficient")]
pub struct MapEntry<C: Coefficient> {
    pub arity: usize,
    #[serde(rename = "in")]
    pub inputs: Vec<usize>,
    pub out: usize,
    pub coef: Series<C>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "C: Coefficient")]
pub struct AlgebraSpec<C: Coefficient> {
    pub grading_modulus: i64,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub unit: Option<usize>,
    pub arity_cutoff: usize,
    #[serde(with = "serde_q")]
    pub energy: Q,
    pub maps: Vec<MapEntry<C>>,
}

/// Finite curved A∞ algebra over `Λ_{≥0}`, truncated in arity and energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coefficient", try_from = "AlgebraSpec<C>", into = "AlgebraSpec<C>")]
pub struct CurvedAInftyAlgebra<C: Coefficient> {
    g: i64,
    generators: Vec<Generator>,
    unit: Option<usize>,
    arity_cutoff: usize,
    energy: Q,
    maps: BTreeMap<Vec<usize>, BTreeMap<usize, Series<C>>>,
}

impl<C: Coefficient> TryFrom<AlgebraSpec<C>> for CurvedAInftyAlgebra<C> {
    type Error = Error;

    fn try_from(s: AlgebraSpec<C>) -> Result<Self> {
        CurvedAInftyAlgebra::new(s.grading_modulus, s.generators, s.unit, s.arity_cutoff, s.energy, s.maps)
    }
}

impl<C: Coefficient> From<CurvedAInftyAlgebra<C>> for AlgebraSpec<C> {
    fn from(a: CurvedAInftyAlgebra<C>) -> Self {
        AlgebraSpec {
            grading_modulus: a.g,
            maps: a.entries(),
            generators: a.generators,
            unit: a.unit,
            arity_cutoff: a.arity_cutoff,
            energy: a.energy,
        }
    }
}

pub(crate) fn congruent(a: i64, b: i64, g: i64) -> bool {
    if g == 0 {
        a == b
    } else {
        (a - b).rem_euclid(g) == 0
    }
}

impl<C: Coefficient> CurvedAInftyAlgebra<C> {
    pub fn new(
        g: i64,
        generators: Vec<Generator>,
        unit: Option<usize>,
        arity_cutoff: usize,
        energy: Q,
        entries: Vec<MapEntry<C>>,
    ) -> Result<Self> {
        if g < 0 || g % 2 != 0 {
            return Err(Error::InvalidAlgebra(format!("grading modulus {g} is not a nonnegative even integer")));
        }
        if energy <= Q::from_integer(0) {
            return Err(Error::InvalidAlgebra("energy cutoff must be positive".into()));
        }
        let n = generators.len();
        if unit.is_some_and(|u| u >= n) {
            return Err(Error::InvalidAlgebra("unit index out of range".into()));
        }
        let mut a = CurvedAInftyAlgebra { g, generators, unit, arity_cutoff, energy, maps: BTreeMap::new() };
        for e in entries {
            if e.arity != e.inputs.len() {
                return Err(Error::InvalidAlgebra(format!("entry {:?} declares arity {}", e.inputs, e.arity)));
            }
            if e.arity > arity_cutoff {
                return Err(Error::InvalidAlgebra(format!("entry {:?} exceeds the arity cutoff", e.inputs)));
            }
            if e.out >= n || e.inputs.iter().any(|&i| i >= n) {
                return Err(Error::InvalidAlgebra(format!("entry {:?} -> {} refers to a missing generator", e.inputs, e.out)));
            }
            if let Valuation::Finite(v) = e.coef.valuation() {
                if v < Q::from_integer(0) {
                    return Err(Error::InvalidAlgebra(format!("coefficient of {:?} has valuation {}", e.inputs, format_q(&v))));
                }
            }
            if e.coef.trunc() < energy {
                return Err(Error::TruncationUnavailable { requested: energy, available: e.coef.trunc() });
            }
            let expected = a.degree_of(&e.inputs) + 2 - e.arity as i64;
            if !e.coef.truncate_lossy(energy).is_zero() && !congruent(a.generators[e.out].degree, expected, g) {
                return Err(Error::InvalidAlgebra(format!(
                    "μ^{} on {:?} lands in degree {} but should have degree {expected} mod {g}",
                    e.arity, e.inputs, a.generators[e.out].degree
                )));
            }
            a.accumulate(e.inputs, e.out, e.coef.truncate_lossy(energy));
        }
        Ok(a)
    }

    /// Builds from tables without the degree audit; used for deformations by
    /// inhomogeneous elements.
    pub(crate) fn from_tables(
        template: &Self,
        maps: BTreeMap<Vec<usize>, BTreeMap<usize, Series<C>>>,
    ) -> Self {
        let mut a = CurvedAInftyAlgebra { maps: BTreeMap::new(), ..template.clone() };
        for (k, outs) in maps {
            for (o, c) in outs {
                a.accumulate(k.clone(), o, c);
            }
        }
        a
    }

    fn accumulate(&mut self, inputs: Vec<usize>, out: usize, coef: Series<C>) {
        let slot = self.maps.entry(inputs.clone()).or_default();
        let cur = slot.remove(&out).unwrap_or_else(|| Series::zero(self.energy));
        let sum = cur.add_lossy(&coef);
        if !sum.is_zero() {
            slot.insert(out, sum);
        }
        if slot.is_empty() {
            self.maps.remove(&inputs);
        }
    }

    pub fn grading_modulus(&self) -> i64 {
        self.g
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn arity_cutoff(&self) -> usize {
        self.arity_cutoff
    }

    pub fn energy(&self) -> Q {
        self.energy
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.generators[i].degree
    }

    pub(crate) fn degree_of(&self, inputs: &[usize]) -> i64 {
        inputs.iter().map(|&i| self.generators[i].degree).sum()
    }

    pub fn entries(&self) -> Vec<MapEntry<C>> {
        self.maps
            .iter()
            .flat_map(|(k, outs)| {
                outs.iter().map(move |(o, c)| MapEntry { arity: k.len(), inputs: k.clone(), out: *o, coef: c.clone() })
            })
            .collect()
    }

    pub(crate) fn tables(&self) -> &BTreeMap<Vec<usize>, BTreeMap<usize, Series<C>>> {
        &self.maps
    }

    pub fn lookup(&self, inputs: &[usize]) -> Option<&BTreeMap<usize, Series<C>>> {
        self.maps.get(inputs)
    }

    pub fn zero(&self) -> Element<C> {
        vec![Series::zero(self.energy); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Element<C> {
        let mut v = self.zero();
        v[i] = Series::one(self.energy);
        v
    }

    /// Brings an element to the algebra's energy cutoff.
    pub fn element(&self, coeffs: Vec<Series<C>>) -> Result<Element<C>> {
        if coeffs.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: coeffs.len() });
        }
        coeffs.into_iter().map(|c| c.truncate(self.energy)).collect()
    }

    /// `μⁿ_{b₀,…,bₙ}(a₁,…,aₙ)`: every stored map with `bₖ` inserted any
    /// number of times between `aₖ` and `aₖ₊₁`. With `bs = None` this is
    /// plain `μⁿ`.
    pub fn apply(&self, bs: Option<&[&Element<C>]>, args: &[&Element<C>]) -> Element<C> {
        let n = args.len();
        let mut out = self.zero();
        for (key, outs) in &self.maps {
            if key.len() < n || (bs.is_none() && key.len() != n) {
                continue;
            }
            let c = self.insertion_sum(key, bs, args);
            if c.is_zero() {
                continue;
            }
            for (o, m) in outs {
                out[*o] = out[*o].add_lossy(&c.mul_tracking(m).truncate_lossy(self.energy));
            }
        }
        out
    }

    fn insertion_sum(&self, key: &[usize], bs: Option<&[&Element<C>]>, args: &[&Element<C>]) -> Series<C> {
        fn go<C: Coefficient>(
            key: &[usize],
            j: usize,
            next: usize,
            acc: Series<C>,
            bs: Option<&[&Element<C>]>,
            args: &[&Element<C>],
            total: &mut Series<C>,
        ) {
            if acc.is_zero() {
                return;
            }
            let n = args.len();
            if j == key.len() {
                if next == n {
                    *total = total.add_lossy(&acc);
                }
                return;
            }
            if key.len() - j < n - next {
                return;
            }
            if next < n {
                let f = &args[next][key[j]];
                go(key, j + 1, next + 1, acc.mul_tracking(f).truncate_lossy(acc.trunc()), bs, args, total);
            }
            if let Some(list) = bs {
                let f = &list[next][key[j]];
                go(key, j + 1, next, acc.mul_tracking(f).truncate_lossy(acc.trunc()), bs, args, total);
            }
        }
        let mut total = Series::zero(self.energy);
        go(key, 0, 0, Series::one(self.energy), bs, args, &mut total);
        total
    }

    /// `μⁿ_b`: the same element inserted in every gap.
    pub fn apply_deformed(&self, b: &Element<C>, args: &[&Element<C>]) -> Element<C> {
        let bs = vec![b; args.len() + 1];
        self.apply(Some(&bs), args)
    }

    /// Splits an element by parity of the integer degree (even, odd).
    pub fn parity_split(&self, x: &Element<C>) -> (Element<C>, Element<C>) {
        let mut even = self.zero();
        let mut odd = self.zero();
        for (i, c) in x.iter().enumerate() {
            if self.degree(i).rem_euclid(2) == 0 {
                even[i] = c.clone();
            } else {
                odd[i] = c.clone();
            }
        }
        (even, odd)
    }
}

pub fn add<C: Coefficient>(a: &Element<C>, b: &Element<C>) -> Element<C> {
    a.iter().zip(b).map(|(x, y)| x.add_lossy(y)).collect()
}

pub fn sub<C: Coefficient>(a: &Element<C>, b: &Element<C>) -> Element<C> {
    a.iter().zip(b).map(|(x, y)| x.sub_lossy(y)).collect()
}

pub fn neg<C: Coefficient>(a: &Element<C>) -> Element<C> {
    a.iter().map(|x| x.neg()).collect()
}

pub fn is_zero<C: Coefficient>(a: &Element<C>) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn max_magnitude<C: Coefficient>(a: &Element<C>) -> f64 {
    a.iter().map(|x| x.max_magnitude()).fold(0.0, f64::max)
}
