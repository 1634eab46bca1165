/** Typed client for the diagnosis service; the UI's only data source.
 *
 * Every displayed number must originate from one of these responses — the
 * client is injectable with a fetch implementation so contract tests can
 * replay recorded fixtures.
 */
import type {
  CatalogResponse,
  DiagnosisReportWire,
  DiseaseEntry,
  HealthResponse,
  LeafResponse,
  ReselectResponse,
  StrokeSetWire,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async json<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(detail, resp.status);
    }
    return (await resp.json()) as T;
  }

  async health(): Promise<HealthResponse> {
    return this.json(await this.fetchImpl(`${this.baseUrl}/api/v1/health`));
  }

  async diseases(): Promise<CatalogResponse> {
    return this.json(await this.fetchImpl(`${this.baseUrl}/api/v1/diseases`));
  }

  async disease(id: number): Promise<DiseaseEntry> {
    return this.json(await this.fetchImpl(`${this.baseUrl}/api/v1/diseases/${id}`));
  }

  async submitLeaf(image: Blob, strokes: StrokeSetWire): Promise<LeafResponse> {
    const form = new FormData();
    form.append('image', image, 'leaf.png');
    form.append('strokes', JSON.stringify(strokes));
    return this.json(
      await this.fetchImpl(`${this.baseUrl}/api/v1/leaf`, { method: 'POST', body: form }),
    );
  }

  async diagnoseByLeafId(leafId: string, options?: object): Promise<DiagnosisReportWire> {
    const form = new FormData();
    form.append('leaf_id', leafId);
    if (options) form.append('options', JSON.stringify(options));
    return this.json(
      await this.fetchImpl(`${this.baseUrl}/api/v1/diagnose`, { method: 'POST', body: form }),
    );
  }

  async reselect(
    leafId: string,
    cornerA: [number, number],
    cornerB: [number, number],
  ): Promise<ReselectResponse> {
    return this.json(
      await this.fetchImpl(`${this.baseUrl}/api/v1/reselect`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ leaf_id: leafId, corner_a: cornerA, corner_b: cornerB }),
      }),
    );
  }
}
