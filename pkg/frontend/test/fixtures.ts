/** Load recorded backend fixtures and build a fetch stub that replays them. */
import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import type { FetchLike } from '../src/api';

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T = unknown>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T;
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

export interface Route {
  match: (url: string, init?: RequestInit) => boolean;
  status?: number;
  body: unknown;
}

export function makeFetch(routes: Route[], calls: RecordedCall[] = []): FetchLike {
  return async (url, init) => {
    calls.push({ url, init });
    for (const route of routes) {
      if (route.match(url, init)) {
        return new Response(JSON.stringify(route.body), {
          status: route.status ?? 200,
          headers: { 'Content-Type': 'application/json' },
        });
      }
    }
    return new Response(JSON.stringify({ detail: `no route for ${url}` }), { status: 404 });
  };
}
