"""Few-shot prompt templates for the language-model stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PromptTemplate:
    instruction: str
    exemplars: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exemplars", tuple((str(i), str(o)) for i, o in self.exemplars))
        if not self.exemplars:
            raise ValueError("a few-shot template needs at least one (input, output) exemplar")

    def render(self, query: str) -> str:
        """Flatten into a single prompt string for models without structured exemplars."""
        parts = [self.instruction.strip(), ""]
        for inp, out in self.exemplars:
            parts += [f"Input: {inp}", f"Output: {out}", ""]
        parts += [f"Input: {query}", "Output:"]
        return "\n".join(parts)

    def wire_exemplars(self) -> list[dict]:
        return [{"input": i, "output": o} for i, o in self.exemplars]


ELABORATE_TEMPLATE = PromptTemplate(
    instruction=(
        "Expand the art style keyword into a short list of concrete visual "
        "traits: palette, brushwork, composition and typical subject matter."
    ),
    exemplars=(
        (
            "anime",
            "clean cel-shaded outlines, flat saturated colours, large expressive "
            "eyes, simplified backgrounds with soft gradients",
        ),
        (
            "Chinese ink painting",
            "monochrome black ink washes on rice paper, generous empty space, "
            "misty mountains and water, calligraphic brush strokes",
        ),
    ),
)

FUSE_TEMPLATE = PromptTemplate(
    instruction=(
        "Merge the scene caption, the listed objects with their positions, and "
        "the style traits into one fluent image-generation prompt. Keep every "
        "object and its position."
    ),
    exemplars=(
        (
            "caption: a cat on a sofa | objects: cat (center), lamp (right) | "
            "style: flat saturated colours, clean outlines",
            "a cat sitting in the center of a sofa with a lamp on the right, drawn "
            "with clean outlines and flat saturated colours",
        ),
    ),
)
