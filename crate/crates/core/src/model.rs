//! Entity records of the social network.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::time::{Date, DateTime};

/// Entity identifier, unique within one entity kind. Posts and Comments
/// share the Message id space.
pub type Id = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Place,
    Organisation,
    TagClass,
    Tag,
    Person,
    Forum,
    Message,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntityKind::Place => "Place",
            EntityKind::Organisation => "Organisation",
            EntityKind::TagClass => "TagClass",
            EntityKind::Tag => "Tag",
            EntityKind::Person => "Person",
            EntityKind::Forum => "Forum",
            EntityKind::Message => "Message",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlaceKind {
    City,
    Country,
    Continent,
}

impl PlaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaceKind::City => "city",
            PlaceKind::Country => "country",
            PlaceKind::Continent => "continent",
        }
    }

    pub fn parse(s: &str) -> Option<PlaceKind> {
        match s {
            "city" => Some(PlaceKind::City),
            "country" => Some(PlaceKind::Country),
            "continent" => Some(PlaceKind::Continent),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrganisationKind {
    University,
    Company,
}

impl OrganisationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrganisationKind::University => "university",
            OrganisationKind::Company => "company",
        }
    }

    pub fn parse(s: &str) -> Option<OrganisationKind> {
        match s {
            "university" => Some(OrganisationKind::University),
            "company" => Some(OrganisationKind::Company),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    pub id: Id,
    pub name: String,
    pub url: String,
    pub kind: PlaceKind,
    /// City -> Country -> Continent; `None` for continents.
    pub part_of: Option<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Organisation {
    pub id: Id,
    pub kind: OrganisationKind,
    pub name: String,
    pub url: String,
    /// A City for universities, a Country for companies.
    pub place: Id,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagClass {
    pub id: Id,
    pub name: String,
    pub url: String,
    pub parent: Option<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tag {
    pub id: Id,
    pub name: String,
    pub url: String,
    pub tag_class: Id,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Person {
    pub id: Id,
    pub first_name: String,
    pub last_name: String,
    pub gender: String,
    pub birthday: Date,
    pub creation_date: DateTime,
    pub location_ip: String,
    pub browser_used: String,
    pub city: Id,
    pub emails: BTreeSet<String>,
    pub languages: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forum {
    pub id: Id,
    pub title: String,
    pub creation_date: DateTime,
    pub moderator: Id,
    pub tags: BTreeSet<Id>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForumKind {
    Wall,
    Album,
    Group,
}

pub const WALL_TITLE_PREFIX: &str = "Wall of ";
pub const ALBUM_TITLE_PREFIX: &str = "Album ";
pub const GROUP_TITLE_PREFIX: &str = "Group for ";

impl Forum {
    /// Walls, albums and groups are told apart by their title prefix.
    pub fn kind(&self) -> ForumKind {
        if self.title.starts_with(WALL_TITLE_PREFIX) {
            ForumKind::Wall
        } else if self.title.starts_with(ALBUM_TITLE_PREFIX) {
            ForumKind::Album
        } else {
            ForumKind::Group
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MessageKind {
    Post {
        forum: Id,
        /// Empty when the post carries text content.
        image_file: String,
        /// Empty when unknown.
        language: String,
    },
    Comment {
        reply_of: Id,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub id: Id,
    pub creation_date: DateTime,
    pub location_ip: String,
    pub browser_used: String,
    /// Empty for image posts.
    pub content: String,
    pub length: u32,
    pub creator: Id,
    /// The Country the message was written in.
    pub country: Id,
    pub tags: BTreeSet<Id>,
    pub kind: MessageKind,
}

impl Message {
    pub fn is_post(&self) -> bool {
        matches!(self.kind, MessageKind::Post { .. })
    }

    pub fn is_comment(&self) -> bool {
        !self.is_post()
    }

    pub fn reply_of(&self) -> Option<Id> {
        match self.kind {
            MessageKind::Comment { reply_of } => Some(reply_of),
            MessageKind::Post { .. } => None,
        }
    }

    pub fn forum(&self) -> Option<Id> {
        match self.kind {
            MessageKind::Post { forum, .. } => Some(forum),
            MessageKind::Comment { .. } => None,
        }
    }

    pub fn image_file(&self) -> &str {
        match &self.kind {
            MessageKind::Post { image_file, .. } => image_file,
            MessageKind::Comment { .. } => "",
        }
    }

    pub fn language(&self) -> &str {
        match &self.kind {
            MessageKind::Post { language, .. } => language,
            MessageKind::Comment { .. } => "",
        }
    }

    /// The text content, or the image file when there is none.
    pub fn content_or_image(&self) -> &str {
        if self.content.is_empty() {
            self.image_file()
        } else {
            &self.content
        }
    }
}

/// Number of characters, the unit of `Message::length`.
pub fn text_length(content: &str) -> u32 {
    content.chars().count() as u32
}
