use std::fmt;

use thiserror::Error;

/// One job of a temporal bin packing instance. The item occupies `weight`
/// units of its bin during the half-open window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub weight: u32,
    pub start: u32,
    pub end: u32,
}

impl Item {
    pub const fn new(weight: u32, start: u32, end: u32) -> Self {
        Self { weight, start, end }
    }

    /// True when the item is active at time instant `time`.
    #[inline]
    pub fn is_active_at(&self, time: u32) -> bool {
        self.start <= time && time < self.end
    }

    #[inline]
    pub fn overlaps(&self, other: &Item) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("bin capacity must be positive")]
    ZeroCapacity,
    #[error("item {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("item {index} has weight {weight} exceeding the capacity {capacity}")]
    WeightExceedsCapacity {
        index: usize,
        weight: u32,
        capacity: u32,
    },
    #[error("item {index} has an empty time window [{start}, {end})")]
    EmptyWindow { index: usize, start: u32, end: u32 },
}

/// A temporal bin packing instance: identical bins of capacity `capacity` and
/// a list of items sorted by non-decreasing start time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    capacity: u32,
    items: Vec<Item>,
}

impl Instance {
    /// Validates the items and sorts them by start time (stable, so items
    /// sharing a start keep their relative order).
    pub fn new(
        name: impl Into<String>,
        capacity: u32,
        mut items: Vec<Item>,
    ) -> Result<Self, InstanceError> {
        if capacity == 0 {
            return Err(InstanceError::ZeroCapacity);
        }
        for (index, item) in items.iter().enumerate() {
            if item.weight == 0 {
                return Err(InstanceError::ZeroWeight { index });
            }
            if item.weight > capacity {
                return Err(InstanceError::WeightExceedsCapacity {
                    index,
                    weight: item.weight,
                    capacity,
                });
            }
            if item.start >= item.end {
                return Err(InstanceError::EmptyWindow {
                    index,
                    start: item.start,
                    end: item.end,
                });
            }
        }
        items.sort_by_key(|item| item.start);
        Ok(Self {
            name: name.into(),
            capacity,
            items,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, index: usize) -> &Item {
        &self.items[index]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.items.iter().map(|item| item.weight).collect()
    }

    /// Same windows and capacity with a replacement weight vector.
    /// Used by the lifting procedures, which never exceed the capacity.
    pub fn with_weights(&self, weights: &[u32]) -> Result<Self, InstanceError> {
        assert_eq!(weights.len(), self.items.len());
        let items = self
            .items
            .iter()
            .zip(weights)
            .map(|(item, &weight)| Item { weight, ..*item })
            .collect();
        Instance::new(self.name.clone(), self.capacity, items)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n = {}, W = {})",
            self.name,
            self.items.len(),
            self.capacity
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items_are_sorted_by_start() {
        let inst = Instance::new(
            "t",
            10,
            vec![Item::new(1, 5, 6), Item::new(2, 0, 3), Item::new(3, 5, 9)],
        )
        .unwrap();
        let starts: Vec<u32> = inst.items().iter().map(|i| i.start).collect();
        assert_eq!(starts, vec![0, 5, 5]);
        // stable among equal starts
        assert_eq!(inst.item(1).weight, 1);
        assert_eq!(inst.item(2).weight, 3);
    }

    #[test]
    fn rejects_invalid_items() {
        assert_eq!(
            Instance::new("t", 4, vec![Item::new(5, 0, 1)]),
            Err(InstanceError::WeightExceedsCapacity {
                index: 0,
                weight: 5,
                capacity: 4
            })
        );
        assert!(matches!(
            Instance::new("t", 4, vec![Item::new(1, 3, 3)]),
            Err(InstanceError::EmptyWindow { .. })
        ));
        assert!(matches!(
            Instance::new("t", 4, vec![Item::new(0, 0, 1)]),
            Err(InstanceError::ZeroWeight { .. })
        ));
        assert_eq!(
            Instance::new("t", 0, vec![]),
            Err(InstanceError::ZeroCapacity)
        );
    }

    #[test]
    fn overlap_is_half_open() {
        let a = Item::new(1, 0, 2);
        assert!(a.overlaps(&Item::new(1, 1, 3)));
        assert!(!a.overlaps(&Item::new(1, 2, 3)));
        assert!(a.is_active_at(1));
        assert!(!a.is_active_at(2));
    }
}
