/** DOM wiring: canvas scribbling, action buttons, report panels.
 *
 * Everything interesting lives in the pure modules; this file only moves
 * events in and state out.
 */
import { ApiClient } from './api';
import {
  BACKGROUND_MARKER_RGBA,
  LEAF_MARKER_RGBA,
  LESION_PATCH_RGBA,
  colorizeMask,
} from './overlay';
import {
  formatProbability,
  formatSeverity,
  nextPage,
  pageCount,
  prevPage,
  selectEntry,
  visibleEntries,
} from './paging';
import { AnnotationSession } from './session';
import { PEN_RADIUS_MAX, PEN_RADIUS_MIN } from './strokes';

const api = new ApiClient('');

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function rgba(c: readonly number[]): string {
  return `rgba(${c[0]}, ${c[1]}, ${c[2]}, ${(c[3] / 255).toFixed(2)})`;
}

async function start() {
  const fileInput = el<HTMLInputElement>('photo');
  const canvas = el<HTMLCanvasElement>('canvas');
  const overlayCanvas = el<HTMLCanvasElement>('overlay');
  const penRadius = el<HTMLInputElement>('pen-radius');
  const penLabel = el<HTMLSelectElement>('pen-label');
  const submitBtn = el<HTMLButtonElement>('submit');
  const diagnoseBtn = el<HTMLButtonElement>('diagnose');
  const reselectBtn = el<HTMLButtonElement>('reselect');
  const prevBtn = el<HTMLButtonElement>('prev-page');
  const nextBtn = el<HTMLButtonElement>('next-page');
  const listPanel = el<HTMLDivElement>('ranked');
  const detailPanel = el<HTMLDivElement>('details');
  const statusLine = el<HTMLDivElement>('status');

  penRadius.min = String(PEN_RADIUS_MIN);
  penRadius.max = String(PEN_RADIUS_MAX);

  let session: AnnotationSession | null = null;
  let image: HTMLImageElement | null = null;
  let reselectClicks: [number, number][] = [];
  let reselectMode = false;

  function status(text: string) {
    statusLine.textContent = text;
  }

  function redraw() {
    if (!session || !image) return;
    const ctx = canvas.getContext('2d')!;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(image, 0, 0);
    for (const stroke of session.strokes) {
      ctx.strokeStyle = rgba(stroke.label === 'leaf' ? LEAF_MARKER_RGBA : BACKGROUND_MARKER_RGBA);
      ctx.lineWidth = stroke.radius * 2;
      ctx.lineCap = 'round';
      ctx.beginPath();
      stroke.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
      ctx.stroke();
    }
    if (session.report) {
      ctx.strokeStyle = rgba(LESION_PATCH_RGBA);
      ctx.lineWidth = 2;
    }
    submitBtn.disabled = !session.canSubmit;
    diagnoseBtn.disabled = !session.canDiagnose;
  }

  function renderReport() {
    if (!session?.report) return;
    const view = session.report;
    listPanel.innerHTML = '';
    for (const entry of visibleEntries(view)) {
      const row = document.createElement('button');
      row.className = 'entry';
      row.textContent = `${entry.name}: ${formatProbability(entry.probability)}`;
      row.onclick = async () => {
        session!.report = selectEntry(view, entry.diseaseId);
        const info = await api.disease(entry.diseaseId);
        detailPanel.innerHTML = `<h3>${info.name}</h3><p><b>Symptoms.</b> ${info.symptoms}</p><p><b>Management.</b> ${info.management}</p>`;
      };
      listPanel.appendChild(row);
    }
    const page = view.page + 1;
    status(
      (view.noLesionsFound ? 'No lesions found: the leaf looks healthy. ' : '') +
        `Severity ${formatSeverity(view.severity)} - page ${page}/${pageCount(view)}`,
    );
  }

  fileInput.onchange = async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    image = new Image();
    image.src = URL.createObjectURL(file);
    await image.decode();
    canvas.width = overlayCanvas.width = image.width;
    canvas.height = overlayCanvas.height = image.height;
    session = new AnnotationSession(api, file);
    redraw();
    status('Scribble on the leaf with the green pen, then submit.');
  };

  canvas.onpointerdown = (ev) => {
    if (!session) return;
    if (reselectMode) {
      reselectClicks.push([ev.offsetX, ev.offsetY]);
      if (reselectClicks.length === 2) {
        const [a, b] = reselectClicks;
        reselectClicks = [];
        reselectMode = false;
        void session.reselectRegion(a, b).then(() => {
          if (session!.reclickPrompt) {
            status('Selection too small: click two opposite corners again.');
            reselectMode = true;
          } else {
            renderReport();
          }
        });
      }
      return;
    }
    session.setPenLabel(penLabel.value as 'leaf' | 'background');
    session.setPenRadius(Number(penRadius.value));
    session.beginStroke(ev.offsetX, ev.offsetY);
    canvas.onpointermove = (mv) => session!.extendStroke(mv.offsetX, mv.offsetY);
  };

  canvas.onpointerup = () => {
    canvas.onpointermove = null;
    session?.endStroke();
    redraw();
  };

  submitBtn.onclick = async () => {
    if (!session) return;
    const leaf = await session.submitAnnotation();
    if (!leaf) {
      status(`Leaf extraction failed: ${session.lastError}`);
      return;
    }
    const maskImg = new Image();
    maskImg.src = `data:image/png;base64,${leaf.mask_png}`;
    await maskImg.decode();
    const octx = overlayCanvas.getContext('2d')!;
    octx.drawImage(maskImg, 0, 0);
    const raw = octx.getImageData(0, 0, overlayCanvas.width, overlayCanvas.height);
    const single = new Uint8Array(raw.data.length / 4);
    for (let i = 0; i < single.length; i++) single[i] = raw.data[4 * i];
    octx.putImageData(
      new ImageData(colorizeMask(single), overlayCanvas.width, overlayCanvas.height),
      0,
      0,
    );
    redraw();
    status(`Leaf extracted: ${leaf.segment.area} px.`);
  };

  diagnoseBtn.onclick = async () => {
    if (!session) return;
    const view = await session.requestDiagnosis();
    if (view) renderReport();
    else status(`Diagnosis failed: ${session.lastError}`);
  };

  reselectBtn.onclick = () => {
    reselectMode = true;
    reselectClicks = [];
    status('Click the two opposite corners of the affected area.');
  };

  prevBtn.onclick = () => {
    if (session?.report) {
      session.report = prevPage(session.report);
      renderReport();
    }
  };
  nextBtn.onclick = () => {
    if (session?.report) {
      session.report = nextPage(session.report);
      renderReport();
    }
  };
}

void start();
