use rayon::prelude::*;

use super::{Element, FiniteGroup, GroupError, TABLE_CAP};

/// Dense multiplication table, indexed by codec rank.
#[derive(Clone, Debug)]
pub struct GroupTable {
    group: FiniteGroup,
    elements: Vec<Element>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl GroupTable {
    pub fn new(group: &FiniteGroup) -> Result<Self, GroupError> {
        let order = group.order();
        if order > TABLE_CAP {
            return Err(GroupError::TooLarge { what: "multiplication table", order, cap: TABLE_CAP });
        }
        let n = order as usize;
        let elements: Vec<Element> = group.elements()?.collect();
        let mut mul = vec![0u32; n * n];
        mul.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = group.rank(&group.mul(&elements[i], &elements[j])) as u32;
            }
        });
        let inv = elements.iter().map(|e| group.rank(&group.inv(e)) as u32).collect();
        let identity = group.rank(&group.identity()) as u32;
        Ok(Self { group: group.clone(), elements, mul, inv, identity })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: u32) -> &Element {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Index of a group element. Panics if it is not a member.
    pub fn index_of(&self, e: &Element) -> u32 {
        assert!(self.group.contains(e), "{e:?} is not in {}", self.group.descriptor());
        self.group.rank(e) as u32
    }

    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        self.mul[i as usize * self.elements.len() + j as usize]
    }

    #[inline]
    pub fn inv(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// Row `i` of the table: `j -> i * j`.
    pub fn row(&self, i: u32) -> &[u32] {
        let n = self.elements.len();
        &self.mul[i as usize * n..(i as usize + 1) * n]
    }
}

/// Conjugacy classes as sorted index lists. The identity class comes first;
/// the rest are ordered by smallest member.
pub fn conjugacy_classes(t: &GroupTable) -> Vec<Vec<u32>> {
    let n = t.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.retain(|&x| x != t.identity());
    order.insert(0, t.identity());
    for x in order {
        if class_of[x as usize] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for g in 0..n as u32 {
            let c = t.mul(t.mul(g, x), t.inv(g));
            if class_of[c as usize] == usize::MAX {
                class_of[c as usize] = id;
                members.push(c);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes
}
