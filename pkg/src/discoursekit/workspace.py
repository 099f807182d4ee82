"""Project workspace: configuration, artifact persistence with provenance,
and the shared stores the CLI and HTTP API both mutate."""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from .corpus import (
    CleaningRules,
    Document,
    LexiconTagger,
    load_keyed_list,
    load_wordlist,
    read_tokenized_jsonl,
)
from .errors import CorruptWorkspace, InvalidConfig
from .index import build_index
from .labeling import SKIPPED, TopicCard, default_instruction_sets
from .lda import TopicModel
from .llm import (
    CachingClient,
    ExchangeLog,
    HttpLlmClient,
    LlmClientConfig,
    MockLlmClient,
    ResponseCache,
    UnavailableClient,
)
from .patterns import SemanticClassScheme, load_pattern_file
from .prosody import AnnotationStore
from .segment import default_registry

CONFIG_VERSION = 1


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class ProjectConfig:
    """Validated view over the workspace config.json."""

    def __init__(self, raw: dict, base_dir: Path):
        if raw.get("version") != CONFIG_VERSION:
            raise InvalidConfig(f"config version must be {CONFIG_VERSION}")
        self.raw = raw
        self.base_dir = base_dir
        self.corpus_path = self._path(raw.get("corpus", {}).get("path"), required=True)
        self.corpus_format = raw.get("corpus", {}).get("format", "jsonl")
        self.pretagged = bool(raw.get("corpus", {}).get("pretagged", False))
        self.stoplist_path = self._path(raw.get("stoplist"))
        self.zh_lexicon_path = self._path(raw.get("zh_lexicon"))
        self.lemma_lexicon_path = self._path(raw.get("lemma_lexicon"))
        self.tag_lexicon_path = self._path(raw.get("tag_lexicon"))
        self.patterns_path = self._path(raw.get("patterns"))
        self.scheme_path = self._path(raw.get("scheme"))
        self.keywords = raw.get("keywords", [])
        self.min_count = int(raw.get("min_count", 2))
        self.min_df = int(raw.get("min_df", 1))
        self.boilerplate = raw.get("boilerplate_patterns", [])
        self.lda = raw.get("lda", {})
        sweep = raw.get("sweep", {})
        self.sweep_kmin = int(sweep.get("kmin", 2))
        self.sweep_kmax = int(sweep.get("kmax", 20))
        self.sweep_topn = int(sweep.get("topn", 10))
        self.sweep_metric = sweep.get("metric", "umass")
        if not (2 <= self.sweep_kmin <= self.sweep_kmax <= 64):
            raise InvalidConfig("sweep range must lie within [2, 64]")
        self.top_keywords = int(raw.get("top_keywords", 10))
        self.llm = raw.get("llm", {"provider": "none"})

    def _path(self, value, required=False):
        if value is None:
            if required:
                raise InvalidConfig("config is missing a required path")
            return None
        p = Path(value)
        if not p.is_absolute():
            p = self.base_dir / p
        if not p.exists():
            raise InvalidConfig(f"configured path does not exist: {p}")
        return p


class Workspace:
    """Directory of inspectable artifacts plus a provenance manifest."""

    def __init__(self, root):
        self.root = Path(root)
        self.artifacts_dir = self.root / "artifacts"
        self.artifacts_dir.mkdir(parents=True, exist_ok=True)
        (self.root / "versions").mkdir(exist_ok=True)
        self.manifest_path = self.root / "manifest.json"
        self.manifest = {"artifacts": {}}
        if self.manifest_path.exists():
            self.manifest = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        config_path = self.root / "config.json"
        if not config_path.exists():
            raise InvalidConfig(f"no config.json in workspace {self.root}")
        self.config = ProjectConfig(json.loads(config_path.read_text(encoding="utf-8")), self.root)
        self._index = None
        self._annotations = None

    # --- manifest / artifacts ---

    def refresh(self):
        """Re-read the manifest (another process may have written artifacts)
        and drop caches that depend on changed artifacts."""
        if self.manifest_path.exists():
            fresh = json.loads(self.manifest_path.read_text(encoding="utf-8"))
            if fresh != self.manifest:
                self.manifest = fresh
                self._index = None

    def _save_manifest(self):
        self.manifest_path.write_text(
            json.dumps(self.manifest, indent=2, ensure_ascii=False), encoding="utf-8")

    def artifact_path(self, name: str) -> Path:
        return self.artifacts_dir / name

    def has_artifact(self, name: str) -> bool:
        return name in self.manifest["artifacts"] and self.artifact_path(name).exists()

    def save_artifact(self, name: str, content: str | bytes, command: str,
                      inputs: dict[str, str] | None = None) -> Path:
        """Write an artifact and record its provenance. A changed artifact
        never silently overwrites: the previous version is archived."""
        path = self.artifact_path(name)
        data = content.encode("utf-8") if isinstance(content, str) else content
        new_hash = hashlib.sha256(data).hexdigest()
        entry = self.manifest["artifacts"].get(name)
        if entry and path.exists() and entry["sha256"] != new_hash:
            stamp = time.strftime("%Y%m%dT%H%M%S")
            archived = self.root / "versions" / f"{name}.{stamp}"
            archived.write_bytes(path.read_bytes())
        path.write_bytes(data)
        self.manifest["artifacts"][name] = {
            "path": str(path.relative_to(self.root)),
            "sha256": new_hash,
            "command": command,
            "timestamp": time.time(),
            "inputs": inputs or {},
        }
        self._save_manifest()
        return path

    def load_artifact(self, name: str, verify: bool = True) -> bytes:
        if not self.has_artifact(name):
            raise CorruptWorkspace(f"missing artifact {name!r}; run its producing command first")
        path = self.artifact_path(name)
        data = path.read_bytes()
        if verify:
            recorded = self.manifest["artifacts"][name]["sha256"]
            if hashlib.sha256(data).hexdigest() != recorded:
                raise CorruptWorkspace(f"artifact {name!r} does not match its recorded hash")
        return data

    def artifact_hash(self, name: str) -> str:
        return self.manifest["artifacts"][name]["sha256"]

    # --- pipeline resources built from config ---

    def cleaning_rules(self) -> CleaningRules:
        return CleaningRules(boilerplate_patterns=self.config.boilerplate)

    def segmenters(self):
        lex = load_wordlist(self.config.zh_lexicon_path) if self.config.zh_lexicon_path else ()
        return default_registry(zh_lexicon=lex)

    def stoplist(self) -> set[str]:
        if self.config.stoplist_path:
            return set(load_wordlist(self.config.stoplist_path))
        return set()

    def lemma_lexicon(self) -> dict[str, str]:
        if self.config.lemma_lexicon_path:
            return load_keyed_list(self.config.lemma_lexicon_path)
        return {}

    def tagger(self) -> LexiconTagger:
        lex = load_keyed_list(self.config.tag_lexicon_path) if self.config.tag_lexicon_path else {}
        return LexiconTagger(lex)

    def patterns(self) -> dict:
        if not self.config.patterns_path:
            return {}
        return load_pattern_file(self.config.patterns_path)

    def scheme(self) -> SemanticClassScheme | None:
        if not self.config.scheme_path:
            return None
        return SemanticClassScheme.from_file(self.config.scheme_path)

    # --- shared stores ---

    def tokenized_corpus(self):
        name = "tokenized_filtered.jsonl" if self.has_artifact("tokenized_filtered.jsonl") \
            else "tokenized.jsonl"
        self.load_artifact(name)
        return read_tokenized_jsonl(self.artifact_path(name)), name

    def index(self):
        if self._index is None:
            corpus, _ = self.tokenized_corpus()
            self._index = build_index(corpus)
        return self._index

    def model(self) -> TopicModel:
        self.load_artifact("model.json")
        return TopicModel.load(self.artifact_path("model.json"))

    def annotation_store(self) -> AnnotationStore:
        if self._annotations is None:
            self._annotations = AnnotationStore(self.root / "annotations.jsonl")
            if self.has_artifact("matches.json"):
                self._annotations.register_matches(self.load_matches())
        return self._annotations

    def exchange_log(self) -> ExchangeLog:
        return ExchangeLog(self.root / "exchange_log.jsonl")

    def llm_client(self):
        cfg = self.config.llm
        provider = cfg.get("provider", "none")
        if provider == "http":
            client = HttpLlmClient(LlmClientConfig(
                endpoint=cfg["endpoint"],
                model=cfg.get("model", "default"),
                auth_env=cfg.get("auth_env", "DISCOURSEKIT_LLM_TOKEN"),
                timeout=float(cfg.get("timeout", 30.0)),
                retries=int(cfg.get("retries", 2)),
            ))
        elif provider == "mock":
            script_path = cfg.get("script")
            if script_path:
                script = json.loads((self.root / script_path).read_text(encoding="utf-8"))
            else:
                script = _echo_mock
            client = MockLlmClient(script, model_name=cfg.get("model", "mock"))
        else:
            client = UnavailableClient()
        cache_dir = cfg.get("cache_dir")
        if cache_dir:
            client = CachingClient(client, ResponseCache(self.root / cache_dir))
        return client

    def instruction_sets(self):
        return default_instruction_sets()

    # --- topic cards ---

    def load_cards(self) -> list[TopicCard]:
        data = json.loads(self.load_artifact("cards.json").decode("utf-8"))
        return [TopicCard(
            topic_id=c["topic_id"],
            keywords=[tuple(kw) for kw in c["keywords"]],
            senses=c.get("senses", []),
            manual_description=c.get("manual_description"),
            implication=c.get("implication", ""),
        ) for c in data]

    def save_cards(self, cards: list[TopicCard], command: str, inputs=None):
        data = [{
            "topic_id": c.topic_id,
            "keywords": [[w, v] for w, v in c.keywords],
            "senses": c.senses,
            "manual_description": c.manual_description,
            "implication": c.implication,
        } for c in cards]
        self.save_artifact("cards.json", json.dumps(data, ensure_ascii=False, indent=1),
                           command, inputs)

    def set_description(self, topic_id: int, text: str | None, skipped: bool = False):
        cards = self.load_cards()
        for c in cards:
            if c.topic_id == topic_id:
                c.manual_description = SKIPPED if skipped else text
                self.save_cards(cards, "description", {"cards.json": self.artifact_hash("cards.json")})
                return c
        raise InvalidConfig(f"no topic {topic_id}")

    # --- pattern matches ---

    def save_matches(self, matches, command: str, inputs=None):
        data = [{
            "match_id": m.match_id,
            "pattern_name": m.pattern_name,
            "doc_id": m.doc_id,
            "span": list(m.span),
            "n_slots": m.n_slots,
            "slot_fillers": {str(k): [[t.surface, t.lemma, t.pos, t.char_offset] for t in v]
                             for k, v in m.slot_fillers.items()},
        } for m in matches]
        self.save_artifact("matches.json", json.dumps(data, ensure_ascii=False, indent=1),
                           command, inputs)
        self.annotation_store().register_matches(matches)

    def load_matches(self):
        from .corpus import Token
        from .patterns import PatternMatch
        data = json.loads(self.load_artifact("matches.json").decode("utf-8"))
        out = []
        for m in data:
            fillers = {int(k): [Token(*t) for t in v] for k, v in m["slot_fillers"].items()}
            out.append(PatternMatch(
                pattern_name=m["pattern_name"], doc_id=m["doc_id"],
                span=tuple(m["span"]), slot_fillers=fillers,
                n_slots=m["n_slots"], match_id=m["match_id"],
            ))
        return out


def _echo_mock(prompt: str) -> str:
    """Built-in deterministic mock: answers sense prompts with one line per
    enumerated keyword and any other prompt with a fixed paragraph."""
    import re
    lines = re.findall(r"^(\d+)\.\s+(\S+)\s*$", prompt, flags=re.MULTILINE)
    if lines and "Keywords:" in prompt:
        return "\n".join(f"{n}. mock sense of {w}" for n, w in lines)
    digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:8]
    return f"Mock implication paragraph ({digest})."
