"""Feature-vector assembly for the regression harness.

Seven predictor configurations over three feature families: the seven
structural descriptors, the three prompt-seeded stationary activations,
and the eight emotion z-scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..affect import PLUTCHIK_EMOTIONS
from ..graphmetrics import STRUCTURAL_FEATURE_NAMES

ALPHA_FEATURE_NAMES = ("alpha_prompt1", "alpha_prompt2", "alpha_prompt3")

EMOTION_FEATURE_NAMES = tuple(f"z_{e}" for e in PLUTCHIK_EMOTIONS)

FEATURE_CONFIGS = (
    "NetStr",
    "Spread",
    "Emotions",
    "NetStr+Spread",
    "NetStr+Emo",
    "Emo+Spread",
    "All",
)

_CONFIG_BLOCKS = {
    "NetStr": ("structural",),
    "Spread": ("alphas",),
    "Emotions": ("emotions",),
    "NetStr+Spread": ("structural", "alphas"),
    "NetStr+Emo": ("structural", "emotions"),
    "Emo+Spread": ("emotions", "alphas"),
    "All": ("structural", "alphas", "emotions"),
}


@dataclass(frozen=True)
class FeatureRow:
    story_id: str
    builder_tag: str
    config: str
    features: dict[str, float]
    target: float

    def names(self):
        return tuple(self.features)

    def vector(self):
        return [self.features[name] for name in self.features]


def assemble_features(structural, alphas, emotions, config):
    """Concatenate the requested feature blocks into one ordered mapping.

    `structural` maps the seven descriptor names to values, `alphas` is the
    (alpha1, alpha2, alpha3) triple, `emotions` maps emotion names (or
    `z_<emotion>` column names) to z-scores.
    """
    if config not in _CONFIG_BLOCKS:
        raise ValueError(f"unknown feature configuration {config!r}")
    out: dict[str, float] = {}
    for block in _CONFIG_BLOCKS[config]:
        if block == "structural":
            for name in STRUCTURAL_FEATURE_NAMES:
                out[name] = float(structural[name])
        elif block == "alphas":
            if len(alphas) != 3:
                raise ValueError("expected exactly three stationary activation values")
            for name, value in zip(ALPHA_FEATURE_NAMES, alphas):
                out[name] = float(value)
        else:
            for emotion, name in zip(PLUTCHIK_EMOTIONS, EMOTION_FEATURE_NAMES):
                out[name] = float(emotions[name] if name in emotions else emotions[emotion])
    return out


@dataclass(frozen=True)
class CorpusFeatures:
    """Per-story feature families plus regression targets.

    structural: {builder: {story_id: {name: value}}}
    alphas:     {builder: {story_id: (a1, a2, a3)}}
    emotions:   {story_id: {name: value}}
    targets:    {target_name: {story_id: value}}
    """

    structural: dict = field(default_factory=dict)
    alphas: dict = field(default_factory=dict)
    emotions: dict = field(default_factory=dict)
    targets: dict = field(default_factory=dict)

    def rows(self, builder, config, target):
        if target not in self.targets:
            raise KeyError(f"unknown target column {target!r}")
        structural = self.structural.get(builder, {})
        alphas = self.alphas.get(builder, {})
        target_map = self.targets[target]
        story_ids = sorted(set(structural) & set(alphas) & set(self.emotions) & set(target_map))
        rows = []
        for story_id in story_ids:
            features = assemble_features(
                structural[story_id], alphas[story_id], self.emotions[story_id], config
            )
            rows.append(
                FeatureRow(
                    story_id=story_id,
                    builder_tag=builder,
                    config=config,
                    features=features,
                    target=float(target_map[story_id]),
                )
            )
        return rows
