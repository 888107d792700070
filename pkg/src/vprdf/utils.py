import os
import re
import tempfile
from pathlib import Path
from typing import Optional, Tuple, Union

NORMALIZATION_SCHEME = 'lowercase_underscore_v1'

_SCHEME = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:')


def normalize_label(text: str) -> str:
    """
    Normalizes a label so that ontology names and RDF local names meet in one space.

    Example:
        normalize_label(' Large-Apartment ') == 'large_apartment'
    """
    return text.strip().lower().replace('-', '_')


def has_scheme(iri: str) -> bool:
    return bool(_SCHEME.match(iri))


def split_iri(iri: str) -> Tuple[str, str]:
    """
    Splits an IRI into its namespace and local part: after the last '#', else after the last '/', else after the
    last ':'.

    Example:
        split_iri('http://ex.org/estate#Rich_Tenant') == ('http://ex.org/estate#', 'Rich_Tenant')
    """
    for separator in ('#', '/', ':'):
        cut = iri.rfind(separator)
        if cut >= 0:
            return iri[:cut + 1], iri[cut + 1:]
    return '', iri


def local_part(iri: str) -> Optional[str]:
    local = split_iri(iri)[1]
    return local or None


def write_atomic(path: Union[str, Path], content: str):
    """
    Writes text to a file so that readers see either the previous file or the complete new one.
    :param path: Destination path; its directory must exist.
    :param content: Text to write, encoded as UTF-8 with LF line endings.
    """
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as file:
            file.write(content)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
