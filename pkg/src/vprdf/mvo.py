"""
Instantiated multi-viewpoints ontologies: the consensual level (global concepts, attributes and roles, linked to no
viewpoint) and the heterogeneous level (local concepts, attributes, roles and memberships, each linked to one or
several viewpoints).

Ontologies are read from a JSON document (`format_version` "1"), validated, and turned into immutable models whose
collections are keyed by normalized name, so declaration order never matters.
"""
import json
import logging
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Union

from pydantic import BaseModel, Extra, ValidationError, validator

from src.vprdf.exceptions import (DanglingReferenceError, DuplicateDeclarationError, DuplicateMembershipError,
                                  EmptyViewpointSetError, HierarchyCycleError, MvoParseError, MvoSchemaError,
                                  MvoValidationError)
from src.vprdf.utils import normalize_label

log = logging.getLogger(__name__)

MVO_FORMAT_VERSION = '1'


class ElementKind(str, Enum):
    concept = 'concept'
    attribute = 'attribute'
    role = 'role'
    individual = 'individual'


class _Frozen(BaseModel):
    class Config:
        frozen = True


class Viewpoint(_Frozen):
    name: str


class GlobalConcept(_Frozen):
    """A consensual concept. It is linked to no viewpoint; only its local attributes are."""
    name: str
    parent: Optional[str] = None
    global_attributes: FrozenSet[str] = frozenset()
    local_attributes: Dict[str, FrozenSet[str]] = {}

    @validator('local_attributes')
    def local_attributes_are_linked(cls, value, values):
        for attribute, viewpoints in value.items():
            if not viewpoints:
                raise ValueError(f"local attribute '{attribute}' of '{values.get('name')}' has no viewpoint")
        return value


class LocalConcept(_Frozen):
    name: str
    viewpoints: FrozenSet[str]
    subsumer: str
    local_parent: Optional[str] = None

    @validator('viewpoints')
    def viewpoints_not_empty(cls, value):
        if not value:
            raise ValueError('a local concept is linked to at least one viewpoint')
        return value


class Role(_Frozen):
    """A relation between concepts. An empty viewpoint set makes it a global role."""
    name: str
    domain: str
    range: str
    viewpoints: FrozenSet[str] = frozenset()

    @property
    def is_local(self) -> bool:
        return bool(self.viewpoints)


class Membership(_Frozen):
    local_concept: str
    viewpoint: str


class Individual(_Frozen):
    name: str
    global_concept: str
    local_memberships: FrozenSet[Membership] = frozenset()
    attribute_values: Dict[str, Any] = {}

    @validator('local_memberships')
    def one_membership_per_viewpoint(cls, value, values):
        seen = set()
        for membership in value:
            if membership.viewpoint in seen:
                raise ValueError(f"'{values.get('name')}' has two local concepts under '{membership.viewpoint}'")
            seen.add(membership.viewpoint)
        return value


class LinkObservation(_Frozen):
    label: str
    kind: ElementKind
    viewpoint: str


class MvpOntology(BaseModel):
    domain_name: str
    viewpoints: Dict[str, Viewpoint] = {}
    global_concepts: Dict[str, GlobalConcept] = {}
    local_concepts: Dict[str, LocalConcept] = {}
    roles: Dict[str, Role] = {}
    individuals: Dict[str, Individual] = {}

    class Config:
        allow_mutation = False

    def __repr__(self):
        return f'MvpOntology({self.domain_name})'

    def summary(self) -> Dict[str, int]:
        return {
            'viewpoints': len(self.viewpoints),
            'global_concepts': len(self.global_concepts),
            'local_concepts': len(self.local_concepts),
            'roles': len(self.roles),
            'individuals': len(self.individuals),
        }


# Document models: the file layout, before names are normalized and references resolved.

class _Spec(BaseModel):
    class Config:
        extra = Extra.forbid


class LocalAttributeSpec(_Spec):
    name: str
    viewpoints: List[str]


class GlobalConceptSpec(_Spec):
    name: str
    parent: Optional[str] = None
    attributes: List[str] = []
    local_attributes: List[LocalAttributeSpec] = []


class LocalConceptSpec(_Spec):
    name: str
    viewpoints: List[str]
    subsumer: str
    parent: Optional[str] = None


class RoleSpec(_Spec):
    name: str
    domain: str
    range: str
    viewpoints: List[str] = []


class MembershipSpec(_Spec):
    local_concept: str
    viewpoint: str


class IndividualSpec(_Spec):
    name: str
    global_concept: str
    memberships: List[MembershipSpec] = []
    attributes: Dict[str, Any] = {}


class MvoDocument(_Spec):
    format_version: str
    domain: str
    viewpoints: List[str] = []
    global_concepts: List[GlobalConceptSpec] = []
    local_concepts: List[LocalConceptSpec] = []
    roles: List[RoleSpec] = []
    individuals: List[IndividualSpec] = []

    @validator('format_version')
    def supported_version(cls, value):
        if value != MVO_FORMAT_VERSION:
            raise ValueError(f"format_version must be '{MVO_FORMAT_VERSION}', got '{value}'")
        return value


def _index(kind: str, names: Iterable[str]) -> List[str]:
    seen = set()
    result = []
    for name in names:
        if name in seen:
            raise DuplicateDeclarationError(kind, name)
        seen.add(name)
        result.append(name)
    return result


def _viewpoint_set(owner: str, names: Iterable[str]) -> FrozenSet[str]:
    viewpoints = frozenset(normalize_label(name) for name in names)
    if not viewpoints:
        raise EmptyViewpointSetError(owner)
    return viewpoints


def _build(document: MvoDocument) -> MvpOntology:
    n = normalize_label
    viewpoints = {name: Viewpoint(name=name) for name in _index('viewpoint', (n(v) for v in document.viewpoints))}

    global_concepts = {}
    for spec in document.global_concepts:
        name = n(spec.name)
        if name in global_concepts:
            raise DuplicateDeclarationError('global concept', name)
        local_attributes = {}
        for attribute in spec.local_attributes:
            label = n(attribute.name)
            if label in local_attributes:
                raise DuplicateDeclarationError('local attribute', f'{name}.{label}')
            local_attributes[label] = _viewpoint_set(label, attribute.viewpoints)
        global_concepts[name] = GlobalConcept(
            name=name,
            parent=None if spec.parent is None else n(spec.parent),
            global_attributes=frozenset(n(a) for a in spec.attributes),
            local_attributes=local_attributes,
        )

    local_concepts = {}
    for spec in document.local_concepts:
        name = n(spec.name)
        if name in local_concepts:
            raise DuplicateDeclarationError('local concept', name)
        local_concepts[name] = LocalConcept(
            name=name,
            viewpoints=_viewpoint_set(name, spec.viewpoints),
            subsumer=n(spec.subsumer),
            local_parent=None if spec.parent is None else n(spec.parent),
        )

    roles = {}
    for spec in document.roles:
        name = n(spec.name)
        if name in roles:
            raise DuplicateDeclarationError('role', name)
        roles[name] = Role(name=name, domain=n(spec.domain), range=n(spec.range),
                           viewpoints=frozenset(n(v) for v in spec.viewpoints))

    individuals = {}
    for spec in document.individuals:
        name = n(spec.name)
        if name in individuals:
            raise DuplicateDeclarationError('individual', name)
        memberships = {}
        for membership in spec.memberships:
            viewpoint = n(membership.viewpoint)
            if viewpoint in memberships:
                raise DuplicateMembershipError(name, viewpoint)
            memberships[viewpoint] = Membership(local_concept=n(membership.local_concept), viewpoint=viewpoint)
        individuals[name] = Individual(name=name, global_concept=n(spec.global_concept),
                                       local_memberships=frozenset(memberships.values()),
                                       attribute_values={n(k): v for k, v in spec.attributes.items()})

    return MvpOntology(domain_name=n(document.domain), viewpoints=viewpoints, global_concepts=global_concepts,
                       local_concepts=local_concepts, roles=roles, individuals=individuals)


def _check_forest(kind: str, parents: Dict[str, Optional[str]]):
    for start in sorted(parents):
        seen = {start}
        current = parents[start]
        while current is not None:
            if current in seen:
                raise HierarchyCycleError(kind, start)
            seen.add(current)
            current = parents.get(current)


def validate_ontology(ontology: MvpOntology) -> MvpOntology:
    """
    Checks the structural rules of an instantiated multi-viewpoints ontology.
    :param ontology: The ontology to check, loaded or built in code.
    :return: The same ontology.
    :raises MvoValidationError: on the first broken rule.
    """
    viewpoints = ontology.viewpoints
    globals_, locals_ = ontology.global_concepts, ontology.local_concepts

    def require_viewpoints(owner: str, names: FrozenSet[str]):
        for viewpoint in sorted(names):
            if viewpoint not in viewpoints:
                raise DanglingReferenceError(owner, 'viewpoint', viewpoint)

    clash = sorted(set(globals_) & set(locals_))
    if clash:
        raise DuplicateDeclarationError('concept', clash[0])

    for concept in globals_.values():
        if concept.parent is not None and concept.parent not in globals_:
            raise DanglingReferenceError(concept.name, 'global concept', concept.parent)
        for attribute, attribute_viewpoints in sorted(concept.local_attributes.items()):
            if not attribute_viewpoints:
                raise EmptyViewpointSetError(attribute)
            require_viewpoints(f'{concept.name}.{attribute}', attribute_viewpoints)
    _check_forest('global concept', {c.name: c.parent for c in globals_.values()})

    for concept in locals_.values():
        if not concept.viewpoints:
            raise EmptyViewpointSetError(concept.name)
        require_viewpoints(concept.name, concept.viewpoints)
        if concept.subsumer not in globals_:
            raise DanglingReferenceError(concept.name, 'global concept', concept.subsumer)
        if concept.local_parent is not None:
            parent = locals_.get(concept.local_parent)
            if parent is None:
                raise DanglingReferenceError(concept.name, 'local concept', concept.local_parent)
            if not concept.viewpoints & parent.viewpoints:
                raise MvoValidationError(f"local concept '{concept.name}' and its parent "
                                         f"'{parent.name}' share no viewpoint")
    _check_forest('local concept', {c.name: c.local_parent for c in locals_.values()})

    for role in ontology.roles.values():
        for field, target in (('domain', role.domain), ('range', role.range)):
            if target not in globals_ and target not in locals_:
                raise DanglingReferenceError(role.name, f'{field} concept', target)
        require_viewpoints(role.name, role.viewpoints)

    for individual in ontology.individuals.values():
        if individual.global_concept not in globals_:
            raise DanglingReferenceError(individual.name, 'global concept', individual.global_concept)
        seen = set()
        for membership in sorted(individual.local_memberships, key=lambda m: m.viewpoint):
            if membership.viewpoint in seen:
                raise DuplicateMembershipError(individual.name, membership.viewpoint)
            seen.add(membership.viewpoint)
            if membership.viewpoint not in viewpoints:
                raise DanglingReferenceError(individual.name, 'viewpoint', membership.viewpoint)
            concept = locals_.get(membership.local_concept)
            if concept is None:
                raise DanglingReferenceError(individual.name, 'local concept', membership.local_concept)
            if membership.viewpoint not in concept.viewpoints:
                raise MvoValidationError(f"'{individual.name}' is an instance of '{concept.name}' under "
                                         f"'{membership.viewpoint}', where that concept is not defined")
    return ontology


def load_mvo(document: Union[str, bytes]) -> MvpOntology:
    """
    Loads and validates an instantiated multi-viewpoints ontology.
    :param document: JSON text of the ontology.
    :return: The validated ontology, with every label normalized.
    :raises MvoParseError: if the text is not well-formed JSON.
    :raises MvoSchemaError: if the JSON does not follow the ontology document schema.
    :raises MvoValidationError: if the ontology breaks a structural rule.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as err:
        raise MvoParseError(err.msg, err.lineno, err.colno) from err
    except UnicodeDecodeError as err:
        raise MvoParseError(str(err)) from err
    if not isinstance(raw, dict):
        raise MvoSchemaError('the document must be a JSON object')
    try:
        parsed = MvoDocument.parse_obj(raw)
    except ValidationError as err:
        raise MvoSchemaError('; '.join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors())) from err
    try:
        ontology = _build(parsed)
    except ValidationError as err:
        raise MvoValidationError('; '.join(e['msg'] for e in err.errors())) from err
    validate_ontology(ontology)
    log.debug('loaded ontology %s: %s', ontology.domain_name, ontology.summary())
    return ontology


def dump_mvo(ontology: MvpOntology) -> str:
    """
    Writes an ontology in the MVO document format, with every collection and key sorted.
    """
    document = {
        'format_version': MVO_FORMAT_VERSION,
        'domain': ontology.domain_name,
        'viewpoints': sorted(ontology.viewpoints),
        'global_concepts': [
            {
                'name': c.name,
                **({} if c.parent is None else {'parent': c.parent}),
                'attributes': sorted(c.global_attributes),
                'local_attributes': [{'name': a, 'viewpoints': sorted(vs)}
                                     for a, vs in sorted(c.local_attributes.items())],
            }
            for _, c in sorted(ontology.global_concepts.items())
        ],
        'local_concepts': [
            {
                'name': c.name,
                'viewpoints': sorted(c.viewpoints),
                'subsumer': c.subsumer,
                **({} if c.local_parent is None else {'parent': c.local_parent}),
            }
            for _, c in sorted(ontology.local_concepts.items())
        ],
        'roles': [
            {'name': r.name, 'domain': r.domain, 'range': r.range, 'viewpoints': sorted(r.viewpoints)}
            for _, r in sorted(ontology.roles.items())
        ],
        'individuals': [
            {
                'name': i.name,
                'global_concept': i.global_concept,
                'memberships': [{'local_concept': m.local_concept, 'viewpoint': m.viewpoint}
                                for m in sorted(i.local_memberships, key=lambda m: m.viewpoint)],
                **({'attributes': i.attribute_values} if i.attribute_values else {}),
            }
            for _, i in sorted(ontology.individuals.items())
        ],
    }
    return json.dumps(document, indent=2, sort_keys=True) + '\n'


def extract_links(ontology: MvpOntology) -> FrozenSet[LinkObservation]:
    """
    Lists every (label, element kind, viewpoint) link of the heterogeneous level. Global concepts, global
    attributes, global roles and individuals without local memberships contribute nothing.
    """
    observations = set()
    for concept in ontology.local_concepts.values():
        observations.update(LinkObservation(label=concept.name, kind=ElementKind.concept, viewpoint=v)
                            for v in concept.viewpoints)
    for concept in ontology.global_concepts.values():
        for attribute, viewpoints in concept.local_attributes.items():
            observations.update(LinkObservation(label=attribute, kind=ElementKind.attribute, viewpoint=v)
                                for v in viewpoints)
    for role in ontology.roles.values():
        observations.update(LinkObservation(label=role.name, kind=ElementKind.role, viewpoint=v)
                            for v in role.viewpoints)
    for individual in ontology.individuals.values():
        observations.update(LinkObservation(label=individual.name, kind=ElementKind.individual,
                                            viewpoint=m.viewpoint)
                            for m in individual.local_memberships)
    return frozenset(observations)
