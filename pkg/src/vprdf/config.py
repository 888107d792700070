import json
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseSettings, Extra, ValidationError, confloat, conint

from src.vprdf.converter import DEFAULT_LINK_LOCAL_NAME, DEFAULT_VP_NAMESPACE, ConversionConfig, VpVocabulary
from src.vprdf.exceptions import ConfigError
from src.vprdf.rdf_core import DEFAULT_NAMESPACE


class CliConfig(BaseSettings):
    """
    Settings shared by the command-line tools.

    Values come, from highest to lowest precedence, from command-line flags, a JSON config file, `VPRDF_*`
    environment variables (for instance `VPRDF_MODEL_PATH`) and the defaults below.
    """
    model_path: Optional[Path] = None
    namespace: str = DEFAULT_VP_NAMESPACE
    link_local_name: str = DEFAULT_LINK_LOCAL_NAME
    default_namespace: str = DEFAULT_NAMESPACE
    theta: Optional[confloat(ge=0.0, le=1.0)] = None
    min_support: Optional[conint(ge=1)] = None
    reified: bool = False
    emit_schema: bool = False
    predicate_concept_fallback: bool = False
    output: Optional[Path] = None

    seed: int = 1
    n_viewpoints: conint(ge=1) = 3
    n_concepts: conint(ge=1) = 20
    n_individuals: conint(ge=1) = 50
    n_triples: conint(ge=1) = 2000
    n_ontologies: conint(ge=1) = 7
    noise_rate: confloat(ge=0.0, le=1.0) = 0.0

    class Config:
        env_prefix = 'VPRDF_'
        extra = Extra.forbid

    @classmethod
    def resolve(cls, config_file: Optional[Path] = None, **flags: Any) -> 'CliConfig':
        """
        Builds the settings for one invocation. Flags left at None do not override.
        :raises ConfigError: if the file cannot be read or a value is out of range.
        """
        values: Dict[str, Any] = {}
        if config_file is not None:
            try:
                values = json.loads(config_file.read_text(encoding='utf-8'))
            except OSError as err:
                raise ConfigError(f'cannot read {config_file}: {err.strerror}') from err
            except json.JSONDecodeError as err:
                raise ConfigError(f'{config_file}: {err.msg} (line {err.lineno}, column {err.colno})') from err
            if not isinstance(values, dict):
                raise ConfigError(f'{config_file} must contain a JSON object')
        values.update({key: value for key, value in flags.items() if value is not None})
        try:
            return cls(**values)
        except ValidationError as err:
            raise ConfigError('; '.join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors())) from err

    def vocabulary(self) -> VpVocabulary:
        try:
            return VpVocabulary.from_namespace(self.namespace, self.link_local_name)
        except ValidationError as err:
            raise ConfigError(str(err)) from err

    def conversion_config(self) -> ConversionConfig:
        return ConversionConfig(vocabulary=self.vocabulary(), emit_schema=self.emit_schema, reified=self.reified,
                                theta=self.theta, min_support=self.min_support,
                                predicate_concept_fallback=self.predicate_concept_fallback)
