use std::collections::HashMap;

use num_bigint::BigUint;

use super::word::{gen_images, GenToken, Word};
use super::{group_order, SpMatrix, SymplecticError};

/// All elements of `Sp_{2ℓ}(r)` in breadth-first order from the identity,
/// each with a shortest word in `C_t, D_{st}, U_t`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    elements: Vec<SpMatrix>,
    index: HashMap<SpMatrix, usize>,
    /// `elements[i] = token · elements[parent]`.
    parent: Vec<Option<(usize, GenToken)>>,
}

impl GroupTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SpMatrix] {
        &self.elements
    }

    pub fn contains(&self, g: &SpMatrix) -> bool {
        self.index.contains_key(g)
    }

    pub fn word(&self, g: &SpMatrix) -> Option<Word> {
        let mut i = *self.index.get(g)?;
        let mut word = Word::new();
        while let Some((p, token)) = self.parent[i] {
            word.push(token);
            i = p;
        }
        Some(word)
    }
}

/// Breadth-first closure of the generator images; refuses groups larger
/// than `cap`.
pub fn enumerate_group(ell: usize, r: u64, cap: usize) -> Result<GroupTable, SymplecticError> {
    let order = group_order(ell, r);
    if order > BigUint::from(cap) {
        return Err(SymplecticError::TooLarge { order, cap });
    }
    let images = gen_images(ell, r);
    let gens: Vec<(GenToken, SpMatrix)> = images
        .tokens()
        .into_iter()
        .map(|tok| (tok, images.base(&tok).expect("valid").clone()))
        .collect();
    let id = SpMatrix::identity(r, ell);
    let mut table = GroupTable { elements: vec![id.clone()], index: HashMap::from([(id, 0)]), parent: vec![None] };
    let mut head = 0;
    while head < table.elements.len() {
        for (tok, m) in &gens {
            let next = m.mul(&table.elements[head]);
            if !table.index.contains_key(&next) {
                table.index.insert(next.clone(), table.elements.len());
                table.elements.push(next);
                table.parent.push(Some((head, *tok)));
            }
        }
        head += 1;
    }
    Ok(table)
}
