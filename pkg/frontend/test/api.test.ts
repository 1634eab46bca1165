import { describe, expect, it } from 'vitest';
import { ApiClient, ApiError } from '../src/api';
import type { CatalogResponse, DiseaseEntry, HealthResponse } from '../src/types';
import { fixture, makeFetch, type RecordedCall } from './fixtures';

describe('api client', () => {
  it('fetches health and catalog from recorded fixtures', async () => {
    const calls: RecordedCall[] = [];
    const client = new ApiClient(
      'http://svc',
      makeFetch(
        [
          { match: (u) => u.endsWith('/api/v1/health'), body: fixture<HealthResponse>('health.json') },
          { match: (u) => u.endsWith('/api/v1/diseases'), body: fixture<CatalogResponse>('diseases.json') },
          { match: (u) => u.endsWith('/api/v1/diseases/4'), body: fixture<DiseaseEntry>('disease_detail.json') },
        ],
        calls,
      ),
    );
    const health = await client.health();
    expect(health.model_id).toBe('fixture-model');
    const catalog = await client.diseases();
    expect(catalog.diseases).toHaveLength(6);
    const detail = await client.disease(4);
    expect(detail.name).toBe('Powdery mildew');
    expect(detail.symptoms.length).toBeGreaterThan(0);
    expect(detail.management.length).toBeGreaterThan(0);
    expect(calls.map((c) => c.url)).toEqual([
      'http://svc/api/v1/health',
      'http://svc/api/v1/diseases',
      'http://svc/api/v1/diseases/4',
    ]);
  });

  it('raises ApiError with the server detail', async () => {
    const client = new ApiClient(
      '',
      makeFetch([
        { match: () => true, status: 404, body: { detail: 'unknown leaf id' } },
      ]),
    );
    await expect(client.diagnoseByLeafId('nope')).rejects.toThrowError(ApiError);
    await expect(client.diagnoseByLeafId('nope')).rejects.toThrow('unknown leaf id');
  });

  it('posts reselect corners as JSON', async () => {
    const calls: RecordedCall[] = [];
    const client = new ApiClient(
      '',
      makeFetch(
        [{ match: (u) => u.endsWith('/api/v1/reselect'), body: fixture('reselect.json') }],
        calls,
      ),
    );
    await client.reselect('leaf-1', [1, 2], [30, 40]);
    const sent = JSON.parse(String(calls[0].init?.body));
    expect(sent).toEqual({ leaf_id: 'leaf-1', corner_a: [1, 2], corner_b: [30, 40] });
  });
});
