"""Shared plumbing for remote embedding/generation providers.

Remote calls are plain HTTP JSON with bounded exponential backoff: an
initial call plus up to 3 retries, sleeping 0.5s/1s/2s between tries,
then the error surfaces.
"""

from __future__ import annotations

import os
import time

import httpx

RETRY_BACKOFFS = (0.5, 1.0, 2.0)


class ProviderError(Exception):
    """A remote provider failed after all retries."""


class ProviderTimeout(ProviderError):
    """A remote provider exceeded the request timeout."""


def resolve_credentials(env_var: str | None) -> str | None:
    if not env_var:
        return None
    value = os.environ.get(env_var)
    if value is None:
        raise ProviderError(f"credentials environment variable {env_var} is not set")
    return value


def post_json_with_retry(
    url: str,
    payload: dict,
    credentials: str | None = None,
    timeout: float = 20.0,
    sleep=time.sleep,
) -> dict:
    """POST a JSON payload, retrying transport and 5xx/429 failures."""
    headers = {}
    if credentials:
        headers["Authorization"] = f"Bearer {credentials}"

    last_error: Exception | None = None
    for attempt in range(1 + len(RETRY_BACKOFFS)):
        if attempt > 0:
            sleep(RETRY_BACKOFFS[attempt - 1])
        try:
            response = httpx.post(url, json=payload, headers=headers, timeout=timeout)
            if response.status_code == 429 or response.status_code >= 500:
                last_error = ProviderError(
                    f"provider returned {response.status_code}: {response.text[:200]}"
                )
            elif response.status_code >= 400:
                raise ProviderError(
                    f"provider rejected request ({response.status_code}): {response.text[:200]}"
                )
            else:
                return response.json()
        except httpx.TimeoutException as exc:
            last_error = ProviderTimeout(f"provider call to {url} timed out: {exc}")
        except httpx.HTTPError as exc:
            last_error = ProviderError(f"provider transport error: {exc}")

    assert last_error is not None
    raise last_error
