"""Text ingestion: sentence segmentation, table-driven lemmatisation,
stop-word filtering with pronoun retention, CoNLL-U parsing and prompt
validation.

Plain-text mode uses a rule-based segmenter and a lemma lookup table;
dependency structure only ever enters through CoNLL-U files produced by
an external parser.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import InputFormatError

DEFAULT_ABBREVIATIONS = frozenset(
    {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.",
        "vs.", "etc.", "e.g.", "i.e.", "cf.", "al.",
    }
)

_WORD_RE = re.compile(r"[A-Za-z]+")


def _load_wordlist(name):
    text = resources.files("storynets.data").joinpath(name).read_text("utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def default_stoplist():
    return _load_wordlist("stopwords.txt")


def default_pronouns():
    return _load_wordlist("pronouns.txt")


def load_wordlist(path):
    """One lowercase entry per line; blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh if line.strip())


def load_lemma_table(path):
    """TSV of surface<TAB>lemma rows, both lowercased on load."""
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise InputFormatError(
                    f"{path}: line {lineno}: expected 2 tab-separated columns, got {len(parts)}"
                )
            table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    upos: str
    sentence_index: int
    token_index: int
    head_index: int | None = None
    deprel: str | None = None
    is_stop: bool = False
    is_pronoun: bool = False

    def __post_init__(self):
        if not self.lemma or self.lemma != self.lemma.lower():
            raise ValueError(f"lemma must be non-empty lowercase, got {self.lemma!r}")
        if self.head_index is not None and self.head_index == self.token_index:
            raise ValueError(f"token {self.token_index} cannot be its own head")


@dataclass(frozen=True)
class PromptMatch:
    prompt_lemma: str
    matched: bool
    matched_node: str | None = None

    def __post_init__(self):
        if self.matched != (self.matched_node is not None):
            raise ValueError("matched flag and matched_node must agree")


@dataclass(frozen=True)
class Story:
    id: str
    prompt_lemmas: tuple[str, str, str]
    text: str
    sentences: tuple[tuple[Token, ...], ...]
    ratings: dict[str, int]
    mean_rating: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(self.prompt_lemmas) != 3:
            raise ValueError("a story carries exactly three prompt lemmas")
        if any(p != p.lower() for p in self.prompt_lemmas):
            raise ValueError("prompt lemmas must be lowercase")
        for rater, value in self.ratings.items():
            if not 1 <= value <= 5:
                raise ValueError(f"rating {value!r} by {rater!r} outside [1, 5]")
        if any(len(sent) == 0 for sent in self.sentences):
            raise ValueError("empty sentences must be discarded before Story construction")
        if not self.ratings:
            raise ValueError("a story needs at least one rating")
        true_mean = sum(self.ratings.values()) / len(self.ratings)
        if self.mean_rating is None:
            object.__setattr__(self, "mean_rating", true_mean)
        elif abs(self.mean_rating - true_mean) > 1e-12:
            raise ValueError(
                f"mean_rating {self.mean_rating} does not match the ratings mean {true_mean}"
            )

    def all_tokens(self):
        for sent in self.sentences:
            yield from sent


def segment_sentences(text, abbreviations=DEFAULT_ABBREVIATIONS):
    """Split text on `.`, `!`, `?` terminators.

    A run of terminators (plus trailing quotes/brackets) ends a sentence
    when followed by whitespace or end of text.  A period additionally
    requires the next non-space character to be uppercase and the word in
    front of it not to be a known abbreviation, so "Dr. Smith" and "3.14"
    stay intact.
    """
    sentences = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch not in ".!?":
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in ".!?\"')]”’":
            j += 1
        run = text[i : j + 1]
        boundary = False
        if j + 1 >= n:
            boundary = True
        elif text[j + 1].isspace():
            if "!" in run or "?" in run:
                boundary = True
            else:
                k = j + 1
                while k < n and text[k].isspace():
                    k += 1
                next_upper = k < n and text[k].isupper()
                word_end = i
                word_start = i
                while word_start > 0 and text[word_start - 1].isalpha():
                    word_start -= 1
                preceding = (text[word_start:word_end] + ".").lower()
                boundary = next_upper and preceding not in abbreviations
        if boundary:
            piece = text[start : j + 1].strip()
            if piece:
                sentences.append(piece)
            start = j + 1
        i = j + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize_and_lemmatize(
    sentence,
    lemma_table,
    stoplist,
    pronouns,
    keep_pronouns,
    sentence_index=0,
):
    """Alphabetic tokens of one sentence, lemmatised and stop-filtered.

    Lemmas come from `lemma_table` with fallback to the lowercased
    surface.  Stop-words are dropped, except pronouns when
    `keep_pronouns` is set: those bypass the filter so they can act as
    network nodes.
    """
    kept = []
    for surface in _WORD_RE.findall(sentence):
        lower = surface.lower()
        lemma = lemma_table.get(lower, lower)
        is_stop = lower in stoplist or lemma in stoplist
        is_pron = lemma in pronouns
        if is_stop and not (keep_pronouns and is_pron):
            continue
        kept.append((surface, lemma, is_stop, is_pron))
    return [
        Token(
            surface=surface,
            lemma=lemma,
            upos="X",
            sentence_index=sentence_index,
            token_index=idx,
            is_stop=is_stop,
            is_pronoun=is_pron,
        )
        for idx, (surface, lemma, is_stop, is_pron) in enumerate(kept)
    ]


def filter_content(sentence, keep_pronouns):
    """Apply the alphabetic/stop-word filter to an already built token list.

    Used to derive the pronoun-free stream from stored sentences and to
    re-filter full CoNLL-U sentences for co-occurrence building.
    """
    out = []
    for tok in sentence:
        if not tok.lemma.isalpha():
            continue
        if tok.is_stop and not (keep_pronouns and tok.is_pronoun):
            continue
        out.append(tok)
    return out


def tokenize_text(text, lemma_table, stoplist, pronouns, abbreviations=DEFAULT_ABBREVIATIONS):
    """Segment and tokenise a raw story, dropping sentences that end up empty.

    Pronouns are retained here; pronoun-free variants are derived later by
    re-filtering, which keeps a single stored token stream per story.
    """
    sentences = []
    for raw in segment_sentences(text, abbreviations):
        toks = tokenize_and_lemmatize(
            raw, lemma_table, stoplist, pronouns, keep_pronouns=True,
            sentence_index=len(sentences),
        )
        if toks:
            sentences.append(tuple(toks))
    return tuple(sentences)


def levenshtein(a, b):
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def match_prompts(story):
    """Check the three prompt lemmas against the story's token stream.

    A prompt counts as present when some token's lemma equals it, or when
    either the lemma or the surface form is within Levenshtein distance 1
    (tolerating inflection and minor misspelling).  The matched node is the
    lemma of the first such token, i.e. a label that exists in the networks.
    """
    matches = []
    for prompt in story.prompt_lemmas:
        hit = None
        for tok in story.all_tokens():
            if tok.lemma == prompt:
                hit = tok.lemma
                break
            if levenshtein(tok.lemma, prompt) <= 1 or levenshtein(tok.surface.lower(), prompt) <= 1:
                hit = tok.lemma
                break
        matches.append(PromptMatch(prompt, hit is not None, hit))
    return matches


_CONLLU_COLUMNS = 10


def read_conllu(data, stoplist=None, pronouns=None):
    """Parse CoNLL-U bytes/text into {story_id: [sentence, ...]}.

    Each sentence block must carry a `# story_id = <id>` comment.  The
    1-based HEAD column becomes a 0-based `head_index` (HEAD=0 -> None);
    multiword ranges and empty nodes are skipped.  Stop/pronoun flags are
    recomputed against the supplied (or bundled) word lists.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    stoplist = default_stoplist() if stoplist is None else stoplist
    pronouns = default_pronouns() if pronouns is None else pronouns

    stories: dict[str, list[tuple[Token, ...]]] = {}
    block_rows: list[tuple[int, list[str]]] = []
    story_id = None

    def flush(last_line):
        nonlocal block_rows, story_id
        if not block_rows:
            story_id = None
            return
        if story_id is None:
            raise InputFormatError(
                f"sentence block ending at line {last_line} has no '# story_id =' comment"
            )
        sentences = stories.setdefault(story_id, [])
        sentences.append(
            _build_sentence(block_rows, len(sentences), stoplist, pronouns)
        )
        block_rows = []
        story_id = None

    lineno = 0
    for lineno, line in enumerate(data.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush(lineno)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("story_id"):
                _, _, value = body.partition("=")
                story_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != _CONLLU_COLUMNS:
            raise InputFormatError(
                f"line {lineno}: expected {_CONLLU_COLUMNS} tab-separated columns, got {len(cols)}"
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword range / empty node
        block_rows.append((lineno, cols))
    flush(lineno + 1)
    return {sid: tuple(sents) for sid, sents in stories.items()}


def _build_sentence(rows, sentence_index, stoplist, pronouns):
    id_to_pos = {}
    for pos, (lineno, cols) in enumerate(rows):
        try:
            cid = int(cols[0])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: bad token id {cols[0]!r}") from exc
        id_to_pos[cid] = pos
    tokens = []
    for pos, (lineno, cols) in enumerate(rows):
        surface = cols[1]
        lemma = (cols[2] if cols[2] != "_" else surface).lower()
        upos = cols[3]
        try:
            head = int(cols[6])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: bad HEAD value {cols[6]!r}") from exc
        if head == 0:
            head_index = None
        else:
            if head not in id_to_pos:
                raise InputFormatError(
                    f"line {lineno}: HEAD {head} refers to a missing token id"
                )
            head_index = id_to_pos[head]
        deprel = cols[7] if cols[7] != "_" else None
        tokens.append(
            Token(
                surface=surface,
                lemma=lemma,
                upos=upos,
                sentence_index=sentence_index,
                token_index=pos,
                head_index=head_index,
                deprel=deprel,
                is_stop=surface.lower() in stoplist or lemma in stoplist,
                is_pronoun=lemma in pronouns,
            )
        )
    return tuple(tokens)


def write_conllu(stories_sentences):
    """Serialise {story_id: sentences} back to CoNLL-U text.

    Inverse of `read_conllu` for lemma/upos/head/deprel; unused columns
    are written as underscores.
    """
    out = io.StringIO()
    for story_id, sentences in stories_sentences.items():
        for sent in sentences:
            out.write(f"# story_id = {story_id}\n")
            for tok in sent:
                head = 0 if tok.head_index is None else tok.head_index + 1
                deprel = tok.deprel if tok.deprel is not None else "_"
                out.write(
                    "\t".join(
                        [
                            str(tok.token_index + 1),
                            tok.surface,
                            tok.lemma,
                            tok.upos,
                            "_",
                            "_",
                            str(head),
                            deprel,
                            "_",
                            "_",
                        ]
                    )
                    + "\n"
                )
            out.write("\n")
    return out.getvalue()


def token_to_dict(tok):
    return {
        "surface": tok.surface,
        "lemma": tok.lemma,
        "upos": tok.upos,
        "head": tok.head_index,
        "deprel": tok.deprel,
        "stop": tok.is_stop,
        "pron": tok.is_pronoun,
    }


def token_from_dict(d, sentence_index, token_index):
    return Token(
        surface=d["surface"],
        lemma=d["lemma"],
        upos=d["upos"],
        sentence_index=sentence_index,
        token_index=token_index,
        head_index=d.get("head"),
        deprel=d.get("deprel"),
        is_stop=d.get("stop", False),
        is_pronoun=d.get("pron", False),
    )


def story_to_json(story):
    payload = {
        "id": story.id,
        "prompts": list(story.prompt_lemmas),
        "text": story.text,
        "ratings": story.ratings,
        "mean_rating": story.mean_rating,
        "sentences": [[token_to_dict(t) for t in sent] for sent in story.sentences],
    }
    return json.dumps(payload, ensure_ascii=False)


def story_from_json(line):
    d = json.loads(line)
    sentences = tuple(
        tuple(token_from_dict(td, si, ti) for ti, td in enumerate(sent))
        for si, sent in enumerate(d["sentences"])
    )
    return Story(
        id=d["id"],
        prompt_lemmas=tuple(d["prompts"]),
        text=d["text"],
        sentences=sentences,
        ratings={k: int(v) for k, v in d["ratings"].items()},
        mean_rating=d["mean_rating"],
    )


def read_stories_csv(path, lemma_table, stoplist, pronouns, conllu_sentences=None):
    """Build Story objects from the corpus CSV.

    Expected columns: id, prompt1..prompt3, text, then one column per
    rater.  When `conllu_sentences` supplies a parse for a story id, the
    parsed sentences replace the plain-text tokenisation.
    """
    stories = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return []
        if len(header) < 6:
            raise InputFormatError(
                f"{path}: need id, 3 prompt columns, text and at least one rater column"
            )
        rater_ids = [h.strip() for h in header[5:]]
        seen_ids = set()
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise InputFormatError(
                    f"{path}: row {rowno}: expected {len(header)} cells, got {len(row)}"
                )
            story_id = row[0].strip()
            if story_id in seen_ids:
                raise InputFormatError(f"{path}: row {rowno}: duplicate story id {story_id!r}")
            seen_ids.add(story_id)
            prompts = tuple(p.strip().lower() for p in row[1:4])
            text = row[4]
            ratings = {}
            for rater, cell in zip(rater_ids, row[5:]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    value = int(cell)
                except ValueError as exc:
                    raise InputFormatError(
                        f"{path}: row {rowno}: rating {cell!r} is not an integer"
                    ) from exc
                if not 1 <= value <= 5:
                    raise InputFormatError(
                        f"{path}: row {rowno}: rating {value} outside [1, 5]"
                    )
                ratings[rater] = value
            if not ratings:
                raise InputFormatError(f"{path}: row {rowno}: story has no ratings")
            if conllu_sentences is not None and story_id in conllu_sentences:
                sentences = conllu_sentences[story_id]
            else:
                sentences = tokenize_text(text, lemma_table, stoplist, pronouns)
            stories.append(
                Story(
                    id=story_id,
                    prompt_lemmas=prompts,
                    text=text,
                    sentences=sentences,
                    ratings=ratings,
                )
            )
    return stories
