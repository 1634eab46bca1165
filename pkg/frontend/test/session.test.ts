import { beforeEach, describe, expect, it } from 'vitest';
import { ApiClient } from '../src/api';
import { pageCount, visibleEntries } from '../src/paging';
import { AnnotationSession } from '../src/session';
import { addPoint, newStroke } from '../src/strokes';
import type {
  DiagnosisReportWire,
  LeafResponse,
  ReselectResponse,
  StrokeSetWire,
} from '../src/types';
import { fixture, makeFetch, type RecordedCall } from './fixtures';

const leafFx = fixture<{ request: { strokes: StrokeSetWire }; response: LeafResponse }>(
  'leaf.json',
);
const diagFx = fixture<{ response: DiagnosisReportWire }>('diagnose.json');
const reselFx = fixture<{
  request: { corner_a: [number, number]; corner_b: [number, number] };
  response: ReselectResponse;
}>('reselect.json');
const degenFx = fixture<{ status: number; response: { detail: string } }>(
  'reselect_degenerate.json',
);

function fixtureBackend(calls: RecordedCall[]) {
  return new ApiClient(
    '',
    makeFetch(
      [
        { match: (u) => u.endsWith('/api/v1/leaf'), body: leafFx.response },
        {
          match: (u, i) => {
            if (!u.endsWith('/api/v1/reselect')) return false;
            const req = JSON.parse(String(i?.body));
            // tiny rectangles fall through to the recorded 422 fixture
            return Math.abs(req.corner_b[0] - req.corner_a[0]) >= 5;
          },
          body: reselFx.response,
        },
        {
          match: (u) => u.endsWith('/api/v1/reselect'),
          status: degenFx.status,
          body: degenFx.response,
        },
        { match: (u) => u.endsWith('/api/v1/diagnose'), body: diagFx.response },
      ],
      calls,
    ),
  );
}

function sessionWithLeafStroke(calls: RecordedCall[] = []): AnnotationSession {
  const session = new AnnotationSession(fixtureBackend(calls), new Blob([new Uint8Array(8)]));
  const stroke = newStroke('leaf', 8);
  addPoint(stroke, 50, 60);
  addPoint(stroke, 90, 60);
  session.strokes.push(stroke);
  return session;
}

describe('annotation flow', () => {
  let calls: RecordedCall[];
  let session: AnnotationSession;

  beforeEach(() => {
    calls = [];
    session = sessionWithLeafStroke(calls);
  });

  it('disables submit without a leaf stroke', async () => {
    const empty = new AnnotationSession(fixtureBackend([]), new Blob());
    expect(empty.canSubmit).toBe(false);
    expect(await empty.submitAnnotation()).toBeNull();
  });

  it('submits strokes and stores the leaf overlay', async () => {
    expect(session.canSubmit).toBe(true);
    const leaf = await session.submitAnnotation();
    expect(leaf).not.toBeNull();
    expect(leaf!.mask_png).toBe(leafFx.response.mask_png);
    expect(leaf!.segment.area).toBe(leafFx.response.segment.area);
    // exactly one request went out, carrying the stroke wire format
    const posts = calls.filter((c) => c.url.endsWith('/api/v1/leaf'));
    expect(posts).toHaveLength(1);
    const form = posts[0].init?.body as FormData;
    const sent = JSON.parse(String(form.get('strokes')));
    expect(sent).toEqual({
      strokes: [{ points: [[50, 60], [90, 60]], radius: 8, label: 'leaf' }],
    });
  });

  it('requests a diagnosis and renders only server numbers', async () => {
    await session.submitAnnotation();
    const view = await session.requestDiagnosis();
    expect(view).not.toBeNull();
    // every displayed number originates from the API response
    expect(view!.severity).toBe(diagFx.response.severity);
    view!.entries.forEach((entry, i) => {
      expect(entry.probability).toBe(diagFx.response.ranked[i][1]);
      expect(entry.diseaseId).toBe(diagFx.response.ranked[i][0]);
    });
    expect(pageCount(view!)).toBe(2);
    expect(visibleEntries(view!)).toHaveLength(3);
  });

  it('reselect with valid corners updates the ordered list', async () => {
    await session.submitAnnotation();
    await session.requestDiagnosis();
    const before = session.report!.entries.map((e) => e.diseaseId);
    const resp = await session.reselectRegion(
      reselFx.request.corner_a,
      reselFx.request.corner_b,
    );
    expect(resp).not.toBeNull();
    expect(session.lastReselect!.probabilities).toEqual(reselFx.response.probabilities);
    const after = session.report!.entries;
    after.forEach((entry, i) => {
      expect(entry.diseaseId).toBe(reselFx.response.ranked[i][0]);
      expect(entry.probability).toBe(reselFx.response.ranked[i][1]);
    });
    expect(after.map((e) => e.probability)).toEqual(
      [...after.map((e) => e.probability)].sort((a, b) => b - a),
    );
    expect(before).not.toBe(after.map((e) => e.diseaseId)); // panel replaced
  });

  it('same-point clicks prompt a re-click without calling the server', async () => {
    await session.submitAnnotation();
    await session.requestDiagnosis();
    const callsBefore = calls.length;
    const resp = await session.reselectRegion([10, 10], [10, 10]);
    expect(resp).toBeNull();
    expect(session.reclickPrompt).toBe(true);
    expect(calls.length).toBe(callsBefore);
  });

  it('server-side degenerate verdicts also prompt a re-click', async () => {
    await session.submitAnnotation();
    await session.requestDiagnosis();
    // passes the local size check but the (mocked) server answers 422
    const resp = await session.reselectRegion([10, 10], [14, 13]);
    expect(resp).toBeNull();
    expect(session.reclickPrompt).toBe(true);
  });

  it('surfaces server errors inline', async () => {
    const failing = new ApiClient(
      '',
      makeFetch([
        {
          match: (u) => u.endsWith('/api/v1/leaf'),
          status: 422,
          body: { detail: 'stroke set has no leaf stroke' },
        },
      ]),
    );
    const s = new AnnotationSession(failing, new Blob());
    const stroke = newStroke('leaf', 8);
    addPoint(stroke, 5, 5);
    s.strokes.push(stroke);
    expect(await s.submitAnnotation()).toBeNull();
    expect(s.lastError).toContain('no leaf stroke');
  });

  it('ignores extra clicks while a request is in flight', async () => {
    await session.submitAnnotation();
    const first = session.requestDiagnosis();
    const second = session.requestDiagnosis(); // busy: resolved as null
    expect(await second).toBeNull();
    expect(await first).not.toBeNull();
  });
});
