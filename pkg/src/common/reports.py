from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict


class SplitModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: list[str]
    v: list[str]
    w: list[str]
    x: list[str]
    y: list[str]


class PumpRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    i: int
    sentence: list[str]
    member: bool
    surgery: bool
    cyk: bool


class PumpReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[PumpRow]
    overall: bool

    @property
    def routes_agree(self) -> bool:
        return all(row.surgery == row.cyk for row in self.rows)


class DecompositionModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    sentence: list[str]
    split: SplitModel
    repeated: str
    outer_code: list[str]
    inner_code: list[str]
    n: int
    tree: str


class PumpOutcome(BaseModel):
    """What the `pump` subcommand prints with --json."""
    model_config = ConfigDict(frozen=True)

    decomposition: DecompositionModel
    report: PumpReport


class RefutationRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    split: SplitModel
    # None when every pumped sentence up to i_max stayed in the language
    failing_i: Optional[int] = None


class RefutationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Literal["Refuted", "NotRefuted"]
    sentence: list[str]
    n: int
    i_max: int
    rows: list[RefutationRow]
    surviving: int

    @property
    def refuted(self) -> bool:
        return self.verdict == "Refuted"
