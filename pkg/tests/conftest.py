import pytest


@pytest.fixture(scope="session")
def session_cache(tmp_path_factory):
    """Shared on-disk cache so expensive basis builds happen once per run."""
    return tmp_path_factory.mktemp("basis-cache")


@pytest.fixture(scope="session")
def basis_of(session_cache):
    """Factory returning (code, basis data) built through the shared cache."""
    from ttimatch.catalog import get_code
    from ttimatch.coker import get_basis_data

    built = {}

    def _get(name):
        if name not in built:
            code = get_code(name)
            built[name] = (code, get_basis_data(code, cache_dir=session_cache))
        return built[name]

    return _get
