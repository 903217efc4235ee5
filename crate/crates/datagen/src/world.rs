//! Static part of the network: places, organisations, tag classes and tags.

use std::collections::{BTreeMap, HashMap};

use snbkit_core::{GraphSnapshot, Id, Organisation, OrganisationKind, Place, PlaceKind, Tag, TagClass};

use crate::dictionaries::{Dictionaries, PropertyDictionary};
use crate::error::GenError;
use crate::rng::{key_hash, Stream};

#[derive(Clone, Debug)]
pub struct CountryInfo {
    pub id: Id,
    pub name: String,
    pub weight: f64,
    pub languages: Vec<String>,
    pub ip_prefix: String,
    pub cities: Vec<Id>,
    pub companies: Vec<Id>,
}

#[derive(Clone, Debug)]
pub struct CityInfo {
    pub id: Id,
    /// Index into [`World::countries`].
    pub country: usize,
    pub university: Id,
}

/// Static entities plus the lookup tables person generation needs.
#[derive(Clone, Debug)]
pub struct World {
    pub graph: GraphSnapshot,
    pub countries: Vec<CountryInfo>,
    pub cities: BTreeMap<Id, CityInfo>,
    /// Tag ids in dictionary order; index equals tag id.
    pub tags: Vec<Id>,
    pub tags_by_class: HashMap<Id, Vec<Id>>,
    /// Interests ranked per country name.
    pub interests: PropertyDictionary,
}

fn url(kind: &str, name: &str) -> String {
    format!("http://dbpedia.org/{kind}/{}", name.replace(' ', "_"))
}

impl World {
    pub fn build(d: &Dictionaries) -> Result<World, GenError> {
        if d.countries.is_empty() {
            return Err(GenError::EmptyDictionary("countries"));
        }
        if d.tags.is_empty() || d.tag_classes.is_empty() {
            return Err(GenError::EmptyDictionary("tags"));
        }
        let mut g = GraphSnapshot::new();
        let mut next_place: Id = 0;
        let mut continents: BTreeMap<&str, Id> = BTreeMap::new();
        for c in &d.countries {
            if !continents.contains_key(c.continent.as_str()) {
                continents.insert(&c.continent, next_place);
                g.insert_place(Place {
                    id: next_place,
                    name: c.continent.clone(),
                    url: url("resource", &c.continent),
                    kind: PlaceKind::Continent,
                    part_of: None,
                })?;
                next_place += 1;
            }
        }
        let mut countries = Vec::new();
        for c in &d.countries {
            g.insert_place(Place {
                id: next_place,
                name: c.name.clone(),
                url: url("resource", &c.name),
                kind: PlaceKind::Country,
                part_of: Some(continents[c.continent.as_str()]),
            })?;
            countries.push(CountryInfo {
                id: next_place,
                name: c.name.clone(),
                weight: c.weight,
                languages: c.languages.clone(),
                ip_prefix: c.ip_prefix.clone(),
                cities: Vec::new(),
                companies: Vec::new(),
            });
            next_place += 1;
        }
        for (ci, c) in d.countries.iter().enumerate() {
            for city in &c.cities {
                g.insert_place(Place {
                    id: next_place,
                    name: city.clone(),
                    url: url("resource", city),
                    kind: PlaceKind::City,
                    part_of: Some(countries[ci].id),
                })?;
                countries[ci].cities.push(next_place);
                next_place += 1;
            }
        }

        let mut cities = BTreeMap::new();
        let mut next_org: Id = 0;
        for (ci, c) in d.countries.iter().enumerate() {
            for (k, city) in c.cities.iter().enumerate() {
                let name = format!("University of {city}");
                let city_id = countries[ci].cities[k];
                g.insert_organisation(Organisation {
                    id: next_org,
                    kind: OrganisationKind::University,
                    url: url("resource", &name),
                    name,
                    place: city_id,
                })?;
                cities.insert(city_id, CityInfo { id: city_id, country: ci, university: next_org });
                next_org += 1;
            }
        }
        for (ci, c) in d.countries.iter().enumerate() {
            for company in &c.companies {
                g.insert_organisation(Organisation {
                    id: next_org,
                    kind: OrganisationKind::Company,
                    name: company.clone(),
                    url: url("resource", company),
                    place: countries[ci].id,
                })?;
                countries[ci].companies.push(next_org);
                next_org += 1;
            }
        }

        let mut class_ids: HashMap<&str, Id> = HashMap::new();
        for (i, (name, _)) in d.tag_classes.iter().enumerate() {
            class_ids.insert(name, i as Id);
        }
        for (i, (name, parent)) in d.tag_classes.iter().enumerate() {
            g.insert_tag_class(TagClass {
                id: i as Id,
                name: name.clone(),
                url: url("ontology", name),
                parent: parent.as_deref().map(|p| class_ids[p]),
            })?;
        }
        let mut tags = Vec::new();
        let mut tags_by_class: HashMap<Id, Vec<Id>> = HashMap::new();
        for (i, (name, class)) in d.tags.iter().enumerate() {
            let class_id = class_ids[class.as_str()];
            g.insert_tag(Tag { id: i as Id, name: name.clone(), url: url("resource", name), tag_class: class_id })?;
            tags.push(i as Id);
            tags_by_class.entry(class_id).or_default().push(i as Id);
        }

        // Each country prefers a different handful of tags.
        let tag_names: Vec<String> = d.tags.iter().map(|(n, _)| n.clone()).collect();
        let mut preferred = HashMap::new();
        for (ci, c) in countries.iter().enumerate() {
            let mut order: Vec<usize> = (0..tags.len()).collect();
            order.sort_by_key(|&t| (key_hash(ci as u64, Stream::RandomKey, t as u64), t));
            order.truncate(10);
            preferred.insert(c.name.clone(), order);
        }
        let interests = PropertyDictionary::new(tag_names, &preferred, 0.08);

        Ok(World { graph: g, countries, cities, tags, tags_by_class, interests })
    }

    pub fn country_of_city(&self, city: Id) -> &CountryInfo {
        &self.countries[self.cities[&city].country]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_world_is_schema_valid() {
        let w = World::build(&Dictionaries::embedded()).unwrap();
        assert!(snbkit_core::validate_schema(&w.graph).is_empty());
        assert_eq!(w.cities.len(), 3 * w.countries.len());
        assert_eq!(w.interests.len(), w.tags.len());
    }
}
