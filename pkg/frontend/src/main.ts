/**
 * Application bootstrap: wire the API client and store to the page.
 * The service origin defaults to same-origin and can be overridden
 * with ?api=http://host:port for a separately served backend.
 */

import { ApiClient } from './api.js';
import { ExplorationStore } from './state.js';
import { bindUi } from './ui.js';

const apiBase = new URLSearchParams(window.location.search).get('api') ?? '';
const store = new ExplorationStore(new ApiClient(apiBase));
(window as unknown as { __store: ExplorationStore }).__store = store;

bindUi(store);
