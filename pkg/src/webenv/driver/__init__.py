"""Live browser sessions over the remote-debugging protocol, plus a scripted fake."""

from webenv.driver.cdp import BROWSER_ENDPOINT_ENV, CdpBrowser, instrumentation_script, resolve_debug_endpoint
from webenv.driver.fake import FakeBrowser, FakePage, FakeSite
from webenv.driver.page import BrowserBackend, NavigationError, PageBackend, PageOperationError
from webenv.driver.session import (
    BrowserSession,
    ConnectFailed,
    InjectionFailed,
    SessionClosedError,
    SessionConfig,
    SnapshotCaptureFailed,
    StepOutcome,
    StepTiming,
    close_session,
    execute,
    observe,
    open_session,
)

__all__ = [
    "BROWSER_ENDPOINT_ENV",
    "BrowserBackend",
    "BrowserSession",
    "CdpBrowser",
    "ConnectFailed",
    "FakeBrowser",
    "FakePage",
    "FakeSite",
    "InjectionFailed",
    "NavigationError",
    "PageBackend",
    "PageOperationError",
    "SessionClosedError",
    "SessionConfig",
    "SnapshotCaptureFailed",
    "StepOutcome",
    "StepTiming",
    "close_session",
    "execute",
    "instrumentation_script",
    "observe",
    "open_session",
    "resolve_debug_endpoint",
]
