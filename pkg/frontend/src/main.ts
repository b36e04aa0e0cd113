import { ApiClient } from './api.js';
import { Console } from './console.js';

const root = document.getElementById('console');
if (root) {
  const app = new Console(new ApiClient(''), root as HTMLElement);
  void app.load();
}
