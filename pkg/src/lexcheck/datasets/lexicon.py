"""Privacy-domain word clusters shared by all synthetic generators.

Each surface word belongs to exactly one cluster; data-practice categories
mix several clusters. The demo embedding space places words of one cluster
around a common anchor, with explicit affinities between related clusters
(and an anti-affinity for open-ended language versus necessity-bounded
language, which is what separates a bounded retention promise from an
unbounded one).
"""
from __future__ import annotations

from ..corpus import CategoryLabel

CLUSTERS: dict[str, tuple[str, ...]] = {
    "collection": (
        "collect", "collects", "collected", "collection", "provide", "provided",
        "gather", "gathered", "obtain", "obtained", "receive", "received",
        "name", "email", "address", "phone", "telephone", "birth", "device",
        "browser", "register", "registration", "signup", "identifier", "cookie",
        "cookies", "automatically", "visit", "visited", "pages", "usage",
        "categories", "account",
    ),
    "purpose": (
        "purpose", "purposes", "use", "uses", "used", "service", "services",
        "improve", "improved", "improving", "personalise", "personalize",
        "process", "processed", "processing", "necessary", "essential",
        "reason", "reasons", "legitimate", "fulfil", "fulfilled", "orders",
        "analytics", "research", "communicate", "communications", "interested",
        "stated", "intended",
    ),
    "sharing": (
        "share", "shares", "shared", "sharing", "disclose", "disclosed",
        "disclosure", "third", "party", "parties", "partner", "partners",
        "affiliate", "affiliates", "vendor", "vendors", "provider", "providers",
        "transfer", "transferred", "sell", "sold", "recipient", "recipients",
        "advertising", "advertisers", "behalf",
    ),
    "choice": (
        "consent", "consents", "choice", "choices", "control", "controls",
        "opt", "unsubscribe", "withdraw", "withdrawal", "withdrawing",
        "preference", "preferences", "object", "permission", "choose",
        "settings", "manage", "marketing",
    ),
    "access": (
        "access", "correct", "corrected", "correction", "rectify",
        "rectification", "update", "amend", "edit", "request", "requests",
        "requested", "copy", "review", "confirm", "confirmation", "rights",
        "exercise", "inaccurate", "possession",
    ),
    "retention": (
        "retain", "retains", "retained", "retention", "store", "stored",
        "storage", "keep", "kept", "period", "periods", "duration", "long",
        "longer", "archive", "archiving", "expire", "expiration",
    ),
    "deletion": (
        "delete", "deleted", "deletion", "destroy", "destroyed", "destruction",
        "erase", "erased", "erasure", "remove", "removed", "removal",
        "anonymise", "anonymize", "dispose", "disposal", "cease",
    ),
    "security": (
        "security", "secure", "securely", "protect", "protection", "protected",
        "safeguard", "safeguards", "encryption", "encrypted", "measures",
        "technical", "organisational", "organizational", "unauthorised",
        "unauthorized", "breach", "confidential", "confidentiality",
        "integrity", "loss", "alteration", "incident",
    ),
    "policy_change": (
        "change", "changes", "changed", "updates", "updated", "revise",
        "revised", "revision", "modify", "modification", "notice", "notify",
        "notification", "posted", "effective", "material", "amendment",
    ),
    "audience": (
        "children", "child", "minor", "minors", "age", "sixteen", "thirteen",
        "parent", "parental", "resident", "residents", "california",
        "european", "union", "region", "country", "countries", "international",
        "jurisdiction", "knowingly",
    ),
    "dnt": (
        "track", "tracking", "tracked", "signal", "signals", "respond",
        "honor", "header",
    ),
    "legal": (
        "law", "laws", "legal", "lawful", "lawfully", "regulation",
        "regulations", "comply", "compliance", "applicable", "require",
        "required", "requirement", "requirements", "obligation", "obligations",
        "authority", "authorities", "court", "supervisory", "basis",
        "controller", "processor",
    ),
    "contact": (
        "contact", "question", "questions", "complaint", "complaints",
        "officer", "representative", "inquiries", "reach",
    ),
    "time": (
        "time", "day", "days", "month", "months", "year", "years", "annually",
        "reasonable", "interaction", "promptly",
    ),
    "openended": (
        "want", "wish", "forever", "indefinitely", "discretion", "unlimited",
        "whenever", "arbitrary",
    ),
}

# Related clusters share part of their anchor direction; negative weights put
# clusters on opposite sides of an axis.
AFFINITY: dict[str, dict[str, float]] = {
    "deletion": {"retention": 0.35, "access": 0.2},
    "retention": {"time": 0.3, "purpose": 0.25},
    "access": {"contact": 0.2},
    "choice": {"purpose": 0.15},
    "collection": {"purpose": 0.2},
    "sharing": {"collection": 0.15},
    "legal": {"purpose": 0.15},
    "openended": {"purpose": -0.7, "legal": -0.5, "time": -0.4},
}

# Words with no cluster anchor: each gets its own direction.
FILLER_WORDS: tuple[str, ...] = (
    "website", "site", "company", "organisation", "organization", "business",
    "product", "products", "page", "section", "describe", "described",
    "include", "includes", "including", "learn", "click", "link", "terms",
    "agreement", "online", "experience", "operate", "help", "support",
    "feature", "features", "offer", "offers", "customers", "people",
    "practices", "handling", "apply", "applies", "part", "form", "manner",
    "ways", "example", "certain", "various", "relevant", "specific",
    "general", "detail", "details", "explain", "explained",
)

# Kept in generated sentences for texture; all are stopwords downstream.
FUNCTION_WORDS: tuple[str, ...] = (
    "we", "you", "your", "our", "the", "a", "to", "of", "and", "or", "in",
    "for", "when", "that", "this", "is", "are", "be", "will", "may", "can",
)

# Everyday words whose demo vectors get small norms, the way frequent words
# carry less weight than specific terminology in trained embedding tables.
GENERIC_WORDS: tuple[str, ...] = (
    "data", "personal", "information", "user", "users", "individual",
    "privacy", "policy", "use", "used", "uses", "long", "longer", "time",
    "store", "stored", "keep", "kept", "provide", "provided", "ways", "need",
    "new", "last", "way", "make", "makes", "give", "given", "take", "taking",
)

CATEGORY_MIX: dict[CategoryLabel, dict[str, float]] = {
    CategoryLabel.FIRST_PARTY_COLLECTION_USE: {"collection": 0.55, "purpose": 0.35, "contact": 0.10},
    CategoryLabel.THIRD_PARTY_SHARING_COLLECTION: {"sharing": 0.65, "collection": 0.20, "purpose": 0.15},
    CategoryLabel.USER_CHOICE_CONTROL: {"choice": 0.70, "purpose": 0.15, "collection": 0.15},
    CategoryLabel.USER_ACCESS_EDIT_DELETION: {"access": 0.55, "deletion": 0.25, "contact": 0.20},
    CategoryLabel.DATA_RETENTION: {"retention": 0.50, "deletion": 0.20, "purpose": 0.20, "time": 0.10},
    CategoryLabel.DATA_SECURITY: {"security": 0.70, "collection": 0.10, "legal": 0.20},
    CategoryLabel.POLICY_CHANGE: {"policy_change": 0.70, "time": 0.15, "contact": 0.15},
    CategoryLabel.INTERNATIONAL_SPECIFIC_AUDIENCES: {"audience": 0.70, "legal": 0.20, "collection": 0.10},
    CategoryLabel.DO_NOT_TRACK: {"dnt": 0.65, "collection": 0.25, "choice": 0.10},
    CategoryLabel.OTHER: {"legal": 0.45, "contact": 0.40, "time": 0.15},
}

# Words common to every category's texture (always available to samplers).
CORE_WORDS: tuple[str, ...] = ("data", "personal", "information", "user", "users", "individual", "privacy", "policy")


def all_surface_words() -> list[str]:
    words = {w for cluster in CLUSTERS.values() for w in cluster}
    words.update(FILLER_WORDS)
    words.update(CORE_WORDS)
    return sorted(words)
